//! Random instances and brute-force reference implementations shared by the
//! integration tests and the acceptance suite.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use rand::Rng;

use malcev_core::finalg::{crg, enumerate_crr, BinRel, FiniteAlgebra, Operation};
use malcev_core::relterm::{is_regular, Inequality, RelTerm, VarId};

pub const NAMES: [&str; 6] = ["X", "Y", "Z", "U", "V", "W"];

pub fn var(i: usize) -> RelTerm {
    RelTerm::var(VarId::named(i, NAMES[i - 1]))
}

/// A random term of depth at most `depth` over `X_1..X_nvars`.
pub fn random_term(rng: &mut impl Rng, depth: usize, nvars: usize, with_plus: bool) -> RelTerm {
    if depth == 0 || rng.gen_bool(0.3) {
        return var(rng.gen_range(1..=nvars));
    }
    let a = random_term(rng, depth - 1, nvars, with_plus);
    let b = random_term(rng, depth - 1, nvars, with_plus);
    match rng.gen_range(0..if with_plus { 5 } else { 4 }) {
        0 | 1 => RelTerm::meet(a, b),
        2 | 3 => RelTerm::compose(a, b),
        _ => RelTerm::plus(a, b),
    }
}

/// Rejection-sampled regular term.
pub fn random_regular(rng: &mut impl Rng, depth: usize, nvars: usize) -> RelTerm {
    loop {
        let t = random_term(rng, depth, nvars, false);
        if is_regular(&t).unwrap() {
            return t;
        }
    }
}

/// Regular `p` with at most one `∘` (so `G(p)` has at most three vertices)
/// and a `+`-free `q` with at most `q_ops` binary connectives.
pub fn random_small_inequality(rng: &mut impl Rng, nvars: usize, q_ops: usize) -> Inequality {
    let p = loop {
        let t = random_term(rng, 3, nvars, false);
        if t.compose_count() <= 1 && is_regular(&t).unwrap() {
            break t;
        }
    };
    let q = loop {
        let t = random_term(rng, 3, nvars, false);
        if t.occurrences() <= q_ops + 1 {
            break t;
        }
    };
    Inequality::new(p, q)
}

pub fn random_relation(rng: &mut impl Rng, n: usize, reflexive: bool) -> BinRel {
    let mut r = if reflexive { BinRel::diagonal(n) } else { BinRel::empty(n) };
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(0.35) {
                r.insert(a, b);
            }
        }
    }
    r
}

/// An algebra with random operations of the given arities.
pub fn random_algebra(rng: &mut impl Rng, n: usize, arities: &[usize]) -> FiniteAlgebra {
    let ops = arities
        .iter()
        .enumerate()
        .map(|(i, &k)| Operation {
            name: format!("f{i}"),
            arity: k,
            table: (0..n.pow(k as u32)).map(|_| rng.gen_range(0..n as u32)).collect(),
        })
        .collect();
    FiniteAlgebra::new(format!("rand{n}"), n, ops).unwrap()
}

pub type Pairs = HashSet<(usize, usize)>;

fn set_compose(a: &Pairs, b: &Pairs) -> Pairs {
    let mut out = HashSet::new();
    for &(x, y) in a {
        for &(y2, z) in b {
            if y == y2 {
                out.insert((x, z));
            }
        }
    }
    out
}

/// Set-based evaluation; `+` is the union of alternating products up to a
/// fixed point of the running union.
pub fn naive_eval(t: &RelTerm, rels: &[Pairs]) -> Pairs {
    match t {
        RelTerm::Var(v) => rels[v.index() - 1].clone(),
        RelTerm::Meet(a, b) => {
            let (x, y) = (naive_eval(a, rels), naive_eval(b, rels));
            x.intersection(&y).copied().collect()
        }
        RelTerm::Compose(a, b) => set_compose(&naive_eval(a, rels), &naive_eval(b, rels)),
        RelTerm::Plus(a, b) => {
            let (x, y) = (naive_eval(a, rels), naive_eval(b, rels));
            let mut acc = x.clone();
            let mut prod = x.clone();
            let mut seen: Vec<(BTreeSet<(usize, usize)>, bool)> = Vec::new();
            let mut odd = true;
            loop {
                let key = (prod.iter().copied().collect::<BTreeSet<_>>(), odd);
                if seen.contains(&key) {
                    return acc;
                }
                seen.push(key);
                prod = set_compose(&prod, if odd { &y } else { &x });
                odd = !odd;
                acc.extend(prod.iter().copied());
            }
        }
    }
}

pub fn to_pairs(r: &BinRel) -> Pairs {
    r.pairs().collect()
}

/// `Cg` by alternating `Crg` with symmetric-transitive closure until stable.
pub fn cg_alternating(a: &FiniteAlgebra, pairs: &[(usize, usize)]) -> BinRel {
    let mut r = crg(a, pairs).unwrap();
    loop {
        let sym = r.union(&r.converse()).unwrap().transitive_closure();
        let next = crg(a, &sym.pairs().collect::<Vec<_>>()).unwrap();
        if next == r {
            return r;
        }
        r = next;
    }
}

/// `Crg` as the intersection of every compatible reflexive relation containing `pairs`.
pub fn crg_by_enumeration(a: &FiniteAlgebra, pairs: &[(usize, usize)]) -> BinRel {
    let mut out = BinRel::full(a.size);
    for r in enumerate_crr(a, usize::MAX).unwrap() {
        if pairs.iter().all(|&(x, y)| r.contains(x, y)) {
            out = out.intersection(&r).unwrap();
        }
    }
    out
}
