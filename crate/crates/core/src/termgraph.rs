//! Labelled graphs of `{∘, ∧}`-terms.
//!
//! Vertices are numbered from 1. Vertices 1 and 2 are the endpoints of the
//! root edge; every composition node adds one vertex. Expansion is
//! leftmost-outermost: a composition allocates its middle vertex before
//! either operand is expanded, then the left operand is expanded fully,
//! then the right one. Edges are listed in the order their variable
//! occurrences are reached, which is left-to-right order in the term.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::finalg::{BinRel, RelEnv};
use crate::partition::{eqv, VertexPartition};
use crate::relterm::{RelTerm, VarId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: VarId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl LabelledGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// DOT rendering with vertices `y1..ym`; byte-stable for equal graphs.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n");
        for v in 1..=self.vertex_count {
            let _ = writeln!(out, "  y{v};");
        }
        for e in &self.edges {
            let _ = writeln!(out, "  y{} -> y{} [label=\"{}\"];", e.from, e.to, e.label);
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_graph(t: &RelTerm) -> Result<LabelledGraph> {
    if !t.is_plus_free() {
        return Err(Error::PlusNotAllowed);
    }
    let mut g = LabelledGraph {
        vertex_count: 2,
        edges: Vec::with_capacity(t.occurrences()),
    };
    expand(t, 1, 2, &mut g);
    Ok(g)
}

fn expand(t: &RelTerm, from: usize, to: usize, g: &mut LabelledGraph) {
    match t {
        RelTerm::Var(v) => g.edges.push(Edge {
            from,
            to,
            label: v.clone(),
        }),
        RelTerm::Meet(a, b) => {
            expand(a, from, to, g);
            expand(b, from, to, g);
        }
        RelTerm::Compose(a, b) => {
            g.vertex_count += 1;
            let mid = g.vertex_count;
            expand(a, from, mid, g);
            expand(b, mid, to, g);
        }
        RelTerm::Plus(..) => unreachable!("checked plus-free"),
    }
}

/// `T_s` for every label `s`: the edge endpoints, in edge order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EdgePairs {
    pairs: BTreeMap<VarId, Vec<(usize, usize)>>,
}

impl EdgePairs {
    /// `T_s`; empty when `s` labels no edge.
    pub fn get(&self, s: &VarId) -> &[(usize, usize)] {
        self.pairs.get(s).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `c(s) = |T_s|`.
    pub fn count(&self, s: &VarId) -> usize {
        self.get(s).len()
    }

    pub fn labels(&self) -> impl Iterator<Item = &VarId> {
        self.pairs.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, &[(usize, usize)])> {
        self.pairs.iter().map(|(k, v)| (k, v.as_slice()))
    }
}

pub fn edge_pairs(g: &LabelledGraph) -> EdgePairs {
    let mut pairs: BTreeMap<VarId, Vec<(usize, usize)>> = BTreeMap::new();
    for e in &g.edges {
        pairs.entry(e.label.clone()).or_default().push((e.from, e.to));
    }
    EdgePairs { pairs }
}

/// `Eqv(T_s)` over all vertices of `g`.
pub fn vertex_partition(g: &LabelledGraph, s: &VarId) -> VertexPartition {
    let pairs: Vec<(usize, usize)> = g
        .edges
        .iter()
        .filter(|e| &e.label == s)
        .map(|e| (e.from, e.to))
        .collect();
    eqv(&pairs, g.vertex_count)
}

/// No vertex is incident to two edges with the same label.
pub fn graph_is_regular(g: &LabelledGraph) -> bool {
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    for e in &g.edges {
        let l = e.label.index();
        if !seen.insert((e.from, l)) || !seen.insert((e.to, l)) {
            return false;
        }
    }
    true
}

/// Universe size shared by the relations on the labels of `g`.
fn universe(g: &LabelledGraph, rels: &impl RelEnv) -> Result<usize> {
    let mut n = None;
    for e in &g.edges {
        let r = rels
            .relation(&e.label)
            .ok_or_else(|| Error::UnboundVariable(e.label.display_name()))?;
        match n {
            None => n = Some(r.size()),
            Some(n) if n != r.size() => {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: r.size(),
                })
            }
            _ => {}
        }
    }
    Ok(n.unwrap_or(0))
}

fn lookup<'a>(rels: &'a impl RelEnv, v: &VarId) -> &'a BinRel {
    rels.relation(v).expect("checked by universe()")
}

/// True iff every edge `(i, j, X_k)` has `(assign_i, assign_j) ∈ R_k`.
/// `assign[v - 1]` is the value of vertex `v`.
pub fn check_assignment(g: &LabelledGraph, rels: &impl RelEnv, assign: &[usize]) -> Result<bool> {
    let n = universe(g, rels)?;
    if assign.len() != g.vertex_count {
        return Err(Error::SizeMismatch {
            expected: g.vertex_count,
            found: assign.len(),
        });
    }
    if let Some(&bad) = assign.iter().find(|&&a| a >= n) {
        return Err(Error::OutOfRange { element: bad, size: n });
    }
    Ok(g
        .edges
        .iter()
        .all(|e| lookup(rels, &e.label).contains(assign[e.from - 1], assign[e.to - 1])))
}

/// A satisfying assignment with `y1 ↦ a1`, `y2 ↦ a2`, if one exists.
/// Exhaustive backtracking over vertices `3..=m` in index order.
pub fn find_assignment(
    g: &LabelledGraph,
    rels: &impl RelEnv,
    a1: usize,
    a2: usize,
) -> Result<Option<Vec<usize>>> {
    let n = universe(g, rels)?;
    for a in [a1, a2] {
        if a >= n {
            return Err(Error::OutOfRange { element: a, size: n });
        }
    }
    let m = g.vertex_count;
    // Edges become checkable once their larger endpoint (1 and 2 count as 2) is set.
    let mut checks: Vec<Vec<&Edge>> = vec![Vec::new(); m + 1];
    for e in &g.edges {
        checks[e.from.max(e.to).max(2)].push(e);
    }
    let mut assign = vec![0; m];
    assign[0] = a1;
    assign[1] = a2;
    let ok_at = |v: usize, assign: &[usize]| {
        checks[v]
            .iter()
            .all(|e| lookup(rels, &e.label).contains(assign[e.from - 1], assign[e.to - 1]))
    };
    if !ok_at(2, &assign) {
        return Ok(None);
    }
    fn search(
        v: usize,
        m: usize,
        n: usize,
        assign: &mut Vec<usize>,
        ok_at: &dyn Fn(usize, &[usize]) -> bool,
    ) -> bool {
        if v > m {
            return true;
        }
        for a in 0..n {
            assign[v - 1] = a;
            if ok_at(v, assign) && search(v + 1, m, n, assign, ok_at) {
                return true;
            }
        }
        false
    }
    Ok(search(3, m, n, &mut assign, &ok_at).then_some(assign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relterm::parse_term;

    fn graph(s: &str) -> LabelledGraph {
        build_graph(&parse_term(s).unwrap()).unwrap()
    }

    fn edges(g: &LabelledGraph) -> Vec<(usize, usize, String)> {
        g.edges().iter().map(|e| (e.from, e.to, e.label.display_name())).collect()
    }

    fn e(from: usize, to: usize, l: &str) -> (usize, usize, String) {
        (from, to, l.to_string())
    }

    #[test]
    fn construction_examples() {
        let g = graph("X");
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(edges(&g), vec![e(1, 2, "X")]);
        let g = graph("S o T");
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(edges(&g), vec![e(1, 3, "S"), e(3, 2, "T")]);
        let g = graph("R & (S o T)");
        assert_eq!(edges(&g), vec![e(1, 2, "R"), e(1, 3, "S"), e(3, 2, "T")]);
        // outer composition allocates vertex 3 before the inner one gets 4
        let g = graph("X o Y o Z");
        assert_eq!(edges(&g), vec![e(1, 4, "X"), e(4, 3, "Y"), e(3, 2, "Z")]);
        assert_eq!(build_graph(&parse_term("X + Y").unwrap()), Err(Error::PlusNotAllowed));
    }

    #[test]
    fn pair_lists() {
        let t = parse_term("R & (S o T)").unwrap();
        let vars: Vec<VarId> = t.vars().into_iter().collect();
        let p = edge_pairs(&build_graph(&t).unwrap());
        assert_eq!(p.get(&vars[0]), &[(1, 2)]);
        assert_eq!(p.get(&vars[1]), &[(1, 3)]);
        assert_eq!(p.get(&vars[2]), &[(3, 2)]);
        assert_eq!(p.count(&VarId::new(9)), 0);

        let p = edge_pairs(&graph("X o X"));
        assert_eq!(p.get(&VarId::new(1)), &[(1, 3), (3, 2)]);
        assert_eq!(edge_pairs(&graph("X")).get(&VarId::new(1)), &[(1, 2)]);
    }

    #[test]
    fn partitions() {
        let g = graph("X o X");
        assert_eq!(vertex_partition(&g, &VarId::new(1)).classes(), &[vec![1, 2, 3]]);
        let g = graph("R & (S o T)");
        assert_eq!(vertex_partition(&g, &VarId::new(2)).classes(), &[vec![1, 3], vec![2]]);
        assert_eq!(vertex_partition(&g, &VarId::new(7)), VertexPartition::discrete(3));
    }

    #[test]
    fn graph_regularity() {
        assert!(graph_is_regular(&graph("X & (Y o Z)")));
        assert!(!graph_is_regular(&graph("X o X")));
        assert!(graph_is_regular(&graph("X & (Y o X o Y)")));
        assert!(!graph_is_regular(&graph("X & (Y o Z o X)")));
    }

    fn env(t: &str, rels: Vec<BinRel>) -> (LabelledGraph, BTreeMap<VarId, BinRel>) {
        let t = parse_term(t).unwrap();
        let env = t.vars().into_iter().zip(rels).collect();
        (build_graph(&t).unwrap(), env)
    }

    #[test]
    fn assignments() {
        let (g, rels) = env("R & (S o T)", vec![BinRel::full(2), BinRel::full(2), BinRel::full(2)]);
        assert!(check_assignment(&g, &rels, &[1, 0, 1]).unwrap());
        assert!(find_assignment(&g, &rels, 0, 0).unwrap().is_some());

        let d = BinRel::diagonal(2);
        let (g, rels) = env("S o T", vec![d.clone(), d.clone()]);
        assert!(!check_assignment(&g, &rels, &[0, 1, 0]).unwrap());
        assert!(check_assignment(&g, &rels, &[0, 1]).is_err());
        assert!(check_assignment(&g, &rels, &[0, 1, 2]).is_err());

        let s = BinRel::from_pairs(2, [(0, 0), (1, 1), (0, 1)]).unwrap();
        let (g, rels) = env("S o T", vec![s.clone(), d.clone()]);
        assert_eq!(find_assignment(&g, &rels, 0, 1).unwrap(), Some(vec![0, 1, 1]));

        let (g, rels) = env("X", vec![s]);
        assert!(check_assignment(&g, &rels, &[0, 1]).unwrap());
        let (g, rels) = env("X", vec![d]);
        assert_eq!(find_assignment(&g, &rels, 0, 1).unwrap(), None);
    }

    #[test]
    fn dot_output() {
        let dot = graph("S o T").to_dot();
        assert_eq!(
            dot,
            "digraph G {\n  y1;\n  y2;\n  y3;\n  y1 -> y3 [label=\"S\"];\n  y3 -> y2 [label=\"T\"];\n}\n"
        );
    }
}
