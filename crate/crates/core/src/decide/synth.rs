//! Term witnesses for Mal'cev conditions in the variety generated by a
//! finite algebra.
//!
//! Identities are checked at every point of `A^M`, `M` the number of
//! variables. An `r`-ary symbol `f` is only ever evaluated at the tuples
//! `D_f ⊆ A^r` its occurrences produce from those points, so it ranges over
//! the `r`-ary term functions of `A` restricted to `D_f`: the subuniverse of
//! `A^{D_f}` generated by the restricted projections. Every candidate comes
//! with a term, so the search below is exact for the variety.
//!
//! The search assigns one symbol at a time (fewest remaining candidates
//! first, candidates in breadth-first order). Each assignment fixes values
//! of the symbols sharing an identity with it and filters their candidates;
//! a symbol left with a single candidate is assigned at once.

use std::collections::HashMap;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::finalg::{for_each_tuple, Closure, FiniteAlgebra, Term, DEFAULT_FREE_CAP};
use crate::malcevgen::{Application, MalcevCondition};

pub const DEFAULT_ARITY_CAP: usize = 8;

#[derive(Clone, Debug)]
pub struct SynthOptions {
    pub arity_cap: usize,
    /// Element cap for each symbol's candidate set.
    pub domain_cap: usize,
    /// Search nodes before giving up.
    pub node_cap: usize,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions {
            arity_cap: DEFAULT_ARITY_CAP,
            domain_cap: DEFAULT_FREE_CAP,
            node_cap: 5_000_000,
        }
    }
}

/// One term per symbol of the condition, in symbol order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermWitness {
    pub terms: Vec<(String, usize, Term)>,
}

impl TermWitness {
    pub fn term(&self, name: &str) -> Option<&Term> {
        self.terms.iter().find(|(n, _, _)| n == name).map(|(_, _, t)| t)
    }

    /// `name(x1, …) = term` per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, arity, t) in &self.terms {
            let vars: Vec<String> = (1..=*arity).map(|i| format!("x{i}")).collect();
            out.push_str(&format!("{name}({}) = {t}\n", vars.join(",")));
        }
        out
    }
}

/// Candidate functions on a point set.
struct Domain {
    closure: Closure,
}

impl Domain {
    fn len(&self) -> usize {
        self.closure.len()
    }

    fn value(&self, e: usize, slot: usize) -> u32 {
        self.closure.element(e)[slot]
    }
}

/// Where the occurrences of a symbol sit, as slots of its point set.
struct Occurrence {
    /// Slot in `D_f` for each point of `A^M`.
    slots: Vec<usize>,
}

enum Side {
    /// A projection: the value at point `pt` is `pt[var - 1]`.
    Var(usize),
    Symbol { sym: usize, occ: usize },
}

struct Problem<'a> {
    points: Vec<Vec<usize>>,
    domains: Vec<Option<Rc<Domain>>>,
    occs: Vec<Vec<Occurrence>>,
    identities: Vec<(Side, Side)>,
    /// Identities touching each symbol.
    touching: Vec<Vec<usize>>,
    alg: &'a FiniteAlgebra,
}

#[derive(Clone)]
struct State {
    assigned: Vec<Option<usize>>,
    required: Vec<Vec<Option<u32>>>,
    candidates: Vec<Vec<u32>>,
}

fn side_value(p: &Problem<'_>, st: &State, side: &Side, pt: usize) -> Option<u32> {
    match *side {
        Side::Var(v) => Some(p.points[pt][v - 1] as u32),
        Side::Symbol { sym, occ } => {
            let e = st.assigned[sym]?;
            let d = p.domains[sym].as_ref().expect("symbol has a domain");
            Some(d.value(e, p.occs[sym][occ].slots[pt]))
        }
    }
}

/// Records that `side` takes value `val` at `pt`. Returns false on conflict.
fn require(p: &Problem<'_>, st: &mut State, side: &Side, pt: usize, val: u32) -> bool {
    match *side {
        Side::Var(v) => p.points[pt][v - 1] as u32 == val,
        Side::Symbol { sym, occ } => {
            let slot = p.occs[sym][occ].slots[pt];
            match st.required[sym][slot] {
                Some(w) => w == val,
                None => {
                    st.required[sym][slot] = Some(val);
                    true
                }
            }
        }
    }
}

fn filter(p: &Problem<'_>, st: &mut State, sym: usize) -> bool {
    let d = p.domains[sym].as_ref().expect("symbol has a domain");
    let req = &st.required[sym];
    st.candidates[sym]
        .retain(|&e| req.iter().enumerate().all(|(slot, r)| r.is_none_or(|v| d.value(e as usize, slot) == v)));
    !st.candidates[sym].is_empty()
}

fn assign(p: &Problem<'_>, st: &mut State, sym: usize, e: usize) -> bool {
    st.assigned[sym] = Some(e);
    let mut touched = Vec::new();
    for &id in &p.touching[sym] {
        let (l, r) = &p.identities[id];
        for pt in 0..p.points.len() {
            match (side_value(p, st, l, pt), side_value(p, st, r, pt)) {
                (Some(a), Some(b)) if a != b => return false,
                (Some(_), Some(_)) => {}
                (Some(a), None) => {
                    if !require(p, st, r, pt, a) {
                        return false;
                    }
                }
                (None, Some(b)) => {
                    if !require(p, st, l, pt, b) {
                        return false;
                    }
                }
                (None, None) => unreachable!("identity touching an assigned symbol"),
            }
        }
        for side in [l, r] {
            if let Side::Symbol { sym: s, .. } = *side {
                if st.assigned[s].is_none() && !touched.contains(&s) {
                    touched.push(s);
                }
            }
        }
    }
    for &s in &touched {
        if st.assigned[s].is_none() && !filter(p, st, s) {
            return false;
        }
    }
    for &s in &touched {
        if st.assigned[s].is_none() && st.candidates[s].len() == 1 {
            let only = st.candidates[s][0] as usize;
            if !assign(p, st, s, only) {
                return false;
            }
        }
    }
    true
}

fn search(p: &Problem<'_>, st: State, nodes: &mut usize, cap: usize) -> Result<Option<State>> {
    let next = (0..st.assigned.len())
        .filter(|&s| p.domains[s].is_some() && st.assigned[s].is_none())
        .min_by_key(|&s| (st.candidates[s].len(), s));
    let Some(sym) = next else {
        return Ok(Some(st));
    };
    for &e in &st.candidates[sym] {
        *nodes += 1;
        if *nodes > cap {
            return Err(Error::CapExceeded {
                what: "synthesis search nodes",
                cap,
                partial: *nodes,
            });
        }
        let mut child = st.clone();
        if assign(p, &mut child, sym, e as usize) {
            if let Some(done) = search(p, child, nodes, cap)? {
                return Ok(Some(done));
            }
        }
    }
    Ok(None)
}

fn gather(app: &Application, pt: &[usize]) -> Vec<usize> {
    app.args.iter().map(|&a| pt[a - 1]).collect()
}

/// Searches for terms of `A` satisfying every identity of `cond`; `None`
/// when the variety generated by `A` has no such terms.
pub fn synthesize_terms(a: &FiniteAlgebra, cond: &MalcevCondition, opts: &SynthOptions) -> Result<Option<TermWitness>> {
    for s in &cond.symbols {
        if s.arity > opts.arity_cap {
            return Err(Error::ArityCap {
                name: s.name.clone(),
                arity: s.arity,
                cap: opts.arity_cap,
            });
        }
    }
    let nvars = cond.variable_count();
    let mut points = Vec::new();
    for_each_tuple(a.size, nvars, |t| points.push(t.to_vec()));

    // point sets D_f, in order of first appearance
    let nsym = cond.symbols.len();
    let mut point_sets: Vec<Vec<Vec<usize>>> = vec![Vec::new(); nsym];
    let mut slot_of: Vec<HashMap<Vec<usize>, usize>> = vec![HashMap::new(); nsym];
    let mut occs: Vec<Vec<Occurrence>> = (0..nsym).map(|_| Vec::new()).collect();
    let mut side = |app: &Application| -> Side {
        let sym = app.symbol;
        if let Some(i) = cond.symbols[sym].projection() {
            return Side::Var(app.args[i - 1]);
        }
        let slots = points
            .iter()
            .map(|pt| {
                let x = gather(app, pt);
                let next = point_sets[sym].len();
                *slot_of[sym].entry(x.clone()).or_insert_with(|| {
                    point_sets[sym].push(x);
                    next
                })
            })
            .collect();
        occs[sym].push(Occurrence { slots });
        Side::Symbol {
            sym,
            occ: occs[sym].len() - 1,
        }
    };
    let identities: Vec<(Side, Side)> = cond.identities.iter().map(|id| (side(&id.lhs), side(&id.rhs))).collect();

    let mut cache: HashMap<(usize, Vec<Vec<usize>>), Rc<Domain>> = HashMap::new();
    let mut domains: Vec<Option<Rc<Domain>>> = vec![None; nsym];
    for (sym, pts) in point_sets.iter().enumerate() {
        if pts.is_empty() {
            continue;
        }
        let arity = cond.symbols[sym].arity;
        let key = (arity, pts.clone());
        let d = match cache.get(&key) {
            Some(d) => d.clone(),
            None => {
                let gens: Vec<Vec<u32>> = (0..arity).map(|i| pts.iter().map(|x| x[i] as u32).collect()).collect();
                let closure = Closure::generate(a, pts.len(), &gens, opts.domain_cap, "synthesis domain")?;
                let d = Rc::new(Domain { closure });
                cache.insert(key, d.clone());
                d
            }
        };
        domains[sym] = Some(d);
    }

    let mut touching = vec![Vec::new(); nsym];
    for (i, (l, r)) in identities.iter().enumerate() {
        for s in [l, r] {
            if let Side::Symbol { sym, .. } = *s {
                if !touching[sym].contains(&i) {
                    touching[sym].push(i);
                }
            }
        }
    }

    let problem = Problem {
        points,
        domains,
        occs,
        identities,
        touching,
        alg: a,
    };
    let mut st = State {
        assigned: vec![None; nsym],
        required: point_sets.iter().map(|p| vec![None; p.len()]).collect(),
        candidates: problem
            .domains
            .iter()
            .map(|d| d.as_ref().map_or(Vec::new(), |d| (0..d.len() as u32).collect()))
            .collect(),
    };

    // identities between projections, and values fixed by projections
    for (l, r) in &problem.identities {
        for pt in 0..problem.points.len() {
            match (l, r) {
                (Side::Var(_), Side::Var(_)) => {
                    if side_value(&problem, &st, l, pt) != side_value(&problem, &st, r, pt) {
                        return Ok(None);
                    }
                }
                (Side::Var(_), s) | (s, Side::Var(_)) => {
                    let v = side_value(&problem, &st, if matches!(l, Side::Var(_)) { l } else { r }, pt)
                        .expect("projection value");
                    if !require(&problem, &mut st, s, pt, v) {
                        return Ok(None);
                    }
                }
                _ => {}
            }
        }
    }
    let mut forced = Vec::new();
    for sym in 0..nsym {
        if problem.domains[sym].is_some() {
            if !filter(&problem, &mut st, sym) {
                return Ok(None);
            }
            if st.candidates[sym].len() == 1 {
                forced.push(sym);
            }
        }
    }
    for sym in forced {
        if st.assigned[sym].is_none() {
            let only = st.candidates[sym][0] as usize;
            if !assign(&problem, &mut st, sym, only) {
                return Ok(None);
            }
        }
    }

    let mut nodes = 0;
    let Some(done) = search(&problem, st, &mut nodes, opts.node_cap)? else {
        return Ok(None);
    };
    let terms = cond
        .symbols
        .iter()
        .enumerate()
        .map(|(sym, s)| {
            let t = match (s.projection(), &problem.domains[sym], done.assigned[sym]) {
                (Some(i), _, _) => Term::Var(i),
                (None, Some(d), Some(e)) => d.closure.term(problem.alg, e),
                // a symbol with no occurrence: any term will do
                _ => Term::Var(1),
            };
            (s.name.clone(), s.arity, t)
        })
        .collect();
    Ok(Some(TermWitness { terms }))
}

/// True iff the terms of `w` satisfy every identity of `cond` at every
/// point of `A^M`.
pub fn verify_witness(a: &FiniteAlgebra, cond: &MalcevCondition, w: &TermWitness) -> bool {
    if w.terms.len() != cond.symbols.len() {
        return false;
    }
    let eval = |app: &Application, pt: &[usize]| -> usize {
        let args = gather(app, pt);
        w.terms[app.symbol].2.eval(a, &args)
    };
    let mut ok = true;
    for_each_tuple(a.size, cond.variable_count(), |pt| {
        if ok {
            ok = cond.identities.iter().all(|id| eval(&id.lhs, pt) == eval(&id.rhs, pt));
        }
    });
    ok
}
