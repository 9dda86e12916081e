//! Deciding inequalities on finite algebras and on the varieties they generate.
//!
//! Per-algebra checks enumerate every tuple of compatible reflexive
//! relations (or congruences). Variety checks use the generic-relation test:
//! in the free algebra `F` on the vertices of `G(p)`, each variable `X_s`
//! becomes the relation generated by the pairs `T_s(p)`, and `p ≤ q` holds
//! in the variety iff `(x1, x2)` lies in the value of `q`.

mod synth;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finalg::{
    cg, crg, enumerate_con, enumerate_crr, eval_term, free_algebra, BinRel, FiniteAlgebra, IndexedEnv,
    DEFAULT_ENUM_BOUND, DEFAULT_FREE_CAP, DEFAULT_TABLE_CAP,
};
use crate::relterm::{expand_plus, is_regular, parse_inequality, Inequality, RelTerm, VarId};
use crate::termgraph::{build_graph, edge_pairs};

pub use synth::{synthesize_terms, verify_witness, SynthOptions, TermWitness, DEFAULT_ARITY_CAP};

/// Which relations the variables range over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Compatible reflexive relations.
    Crr,
    /// Congruences.
    Con,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Algebra,
    Variety,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Counterexample {
    /// A failing relation tuple, as 0/1 matrices keyed by variable, and a
    /// pair in `p` but not in `q`.
    Algebra {
        relations: BTreeMap<String, Vec<Vec<u8>>>,
        pair: (usize, usize),
    },
    /// The generic relations in the free algebra for which `(x1, x2) ∉ q`.
    Variety {
        free_algebra_size: usize,
        generators: BTreeMap<String, Vec<(String, String)>>,
        relation_sizes: BTreeMap<String, usize>,
        pair: (String, String),
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckVerdict {
    pub mode: Mode,
    pub level: Level,
    pub holds: bool,
    /// Least `k ≥ 2` with `p ≤ q^(k)`, reported when `+` occurs and the check holds.
    pub witness_k: Option<usize>,
    pub counterexample: Option<Counterexample>,
}

impl CheckVerdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// Bound on `n(n-1)` for enumeration.
    pub enum_bound: usize,
    /// Element cap for free algebras.
    pub free_cap: usize,
    pub table_cap: usize,
    /// Largest number of relation tuples [`check_algebra`] will try.
    pub tuple_cap: usize,
    /// Worker threads for [`check_algebra`]; 1 runs sequentially.
    pub threads: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            enum_bound: DEFAULT_ENUM_BOUND,
            free_cap: DEFAULT_FREE_CAP,
            table_cap: DEFAULT_TABLE_CAP,
            tuple_cap: 50_000_000,
            threads: 1,
        }
    }
}

fn has_plus(ineq: &Inequality) -> bool {
    !ineq.lhs.is_plus_free() || !ineq.rhs.is_plus_free()
}

/// Slot `i - 1` of the result holds the relation for `X_i`; unused slots get `filler`.
fn slots<'a>(vars: &[VarId], rels: &[&'a BinRel], filler: &'a BinRel) -> Vec<&'a BinRel> {
    let len = vars.iter().map(|v| v.index()).max().unwrap_or(0);
    let mut out = vec![filler; len];
    for (v, r) in vars.iter().zip(rels) {
        out[v.index() - 1] = r;
    }
    out
}

fn first_missing(p: &BinRel, q: &BinRel) -> Option<(usize, usize)> {
    p.pairs().find(|&(a, b)| !q.contains(a, b))
}

/// Least `k ≥ 2` with `p ⊆ q^(k)`, given that `p ⊆ q` holds for these relations.
fn least_k(p: &BinRel, q: &RelTerm, env: &IndexedEnv<'_>) -> Result<usize> {
    let mut k = 2;
    loop {
        if p.is_subset(&eval_term(&expand_plus(q, k)?, env)?)? {
            return Ok(k);
        }
        k += 1;
    }
}

/// `p ≤ q` for every tuple of relations of `A` in the class given by `mode`.
///
/// Tuples are tried in lexicographic order over the enumeration order of
/// the class, variables ordered by index; the first failing tuple is
/// reported regardless of the thread count.
pub fn check_algebra(a: &FiniteAlgebra, ineq: &Inequality, mode: Mode, opts: &CheckOptions) -> Result<CheckVerdict> {
    let class: Vec<BinRel> = match mode {
        Mode::Crr => enumerate_crr(a, opts.enum_bound)?.collect(),
        Mode::Con => enumerate_con(a, opts.enum_bound)?.collect(),
    };
    let vars: Vec<VarId> = ineq.vars().into_iter().collect();
    let total = u32::try_from(vars.len())
        .ok()
        .and_then(|v| class.len().checked_pow(v))
        .filter(|&t| t <= opts.tuple_cap)
        .ok_or(Error::CapExceeded {
            what: "relation tuples",
            cap: opts.tuple_cap,
            partial: 0,
        })?;
    let filler = BinRel::diagonal(a.size);
    let tuple = |mut idx: usize| -> Vec<&BinRel> {
        let mut t = vec![&filler; vars.len()];
        for slot in t.iter_mut().rev() {
            *slot = &class[idx % class.len()];
            idx /= class.len();
        }
        t
    };
    let fails = |idx: usize| -> Result<Option<(usize, usize)>> {
        let t = tuple(idx);
        let env = IndexedEnv(&slots(&vars, &t, &filler));
        let p = eval_term(&ineq.lhs, &env)?;
        let q = eval_term(&ineq.rhs, &env)?;
        Ok(first_missing(&p, &q))
    };
    let hit = |idx: &usize| !matches!(fails(*idx), Ok(None));
    let first = if opts.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::InvalidAlgebra(format!("thread pool: {e}")))?;
        pool.install(|| (0..total).into_par_iter().find_first(hit))
    } else {
        (0..total).find(hit)
    };
    if let Some(idx) = first {
        // re-run to surface evaluation errors
        let pair = fails(idx)?.expect("tuple fails");
        let relations = vars
            .iter()
            .zip(tuple(idx))
            .map(|(v, r)| (v.display_name(), r.to_matrix()))
            .collect();
        return Ok(CheckVerdict {
            mode,
            level: Level::Algebra,
            holds: false,
            witness_k: None,
            counterexample: Some(Counterexample::Algebra { relations, pair }),
        });
    }
    let witness_k = if has_plus(ineq) {
        let mut best = 2;
        for idx in 0..total {
            let t = tuple(idx);
            let env = IndexedEnv(&slots(&vars, &t, &filler));
            let p = eval_term(&ineq.lhs, &env)?;
            best = best.max(least_k(&p, &ineq.rhs, &env)?);
        }
        Some(best)
    } else {
        None
    };
    Ok(CheckVerdict {
        mode,
        level: Level::Algebra,
        holds: true,
        witness_k,
        counterexample: None,
    })
}

/// `p ≤ q` in the variety generated by `A`, by the generic-relation test.
///
/// When `q` contains `+`, `witness_k` is the least `k ≥ 2` with
/// `(x1, x2) ∈ q^(k)`; generic relations are reflexive, so the expansions
/// increase with `k` and the search always ends once the check holds.
pub fn check_variety(a: &FiniteAlgebra, ineq: &Inequality, mode: Mode, opts: &CheckOptions) -> Result<CheckVerdict> {
    if !ineq.lhs.is_plus_free() {
        return Err(Error::PlusNotAllowed);
    }
    let gp = build_graph(&ineq.lhs)?;
    let m = gp.vertex_count();
    let free = free_algebra(a, m, opts.free_cap)?;
    let fa = free.to_algebra(opts.table_cap)?;
    let pairs = edge_pairs(&gp);
    let vars: Vec<VarId> = ineq.vars().into_iter().collect();
    let mut rels = Vec::with_capacity(vars.len());
    for v in &vars {
        let gens: Vec<(usize, usize)> = pairs
            .get(v)
            .iter()
            .map(|&(i, j)| (free.generator(i), free.generator(j)))
            .collect();
        rels.push(match mode {
            Mode::Crr => crg(&fa, &gens)?,
            Mode::Con => cg(&fa, &gens)?,
        });
    }
    let filler = BinRel::diagonal(fa.size);
    let refs: Vec<&BinRel> = rels.iter().collect();
    let slotted = slots(&vars, &refs, &filler);
    let env = IndexedEnv(&slotted);
    let (x1, x2) = (free.generator(1), free.generator(2));
    let holds = eval_term(&ineq.rhs, &env)?.contains(x1, x2);
    let witness_k = if holds && !ineq.rhs.is_plus_free() {
        let mut k = 2;
        while !eval_term(&expand_plus(&ineq.rhs, k)?, &env)?.contains(x1, x2) {
            k += 1;
        }
        Some(k)
    } else {
        None
    };
    let counterexample = (!holds).then(|| Counterexample::Variety {
        free_algebra_size: free.len(),
        generators: vars
            .iter()
            .map(|v| {
                let g = pairs.get(v).iter().map(|&(i, j)| (format!("x{i}"), format!("x{j}"))).collect();
                (v.display_name(), g)
            })
            .collect(),
        relation_sizes: vars.iter().zip(&rels).map(|(v, r)| (v.display_name(), r.count())).collect(),
        pair: ("x1".into(), "x2".into()),
    });
    Ok(CheckVerdict {
        mode,
        level: Level::Variety,
        holds,
        witness_k,
        counterexample,
    })
}

/// Both generic tests side by side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub crr: CheckVerdict,
    pub con: CheckVerdict,
    /// `p` regular and `q` with at most one `∘`.
    pub hypotheses_hold: bool,
    pub agree: bool,
    /// Hypotheses hold but the verdicts differ: an implementation bug.
    pub discrepancy: bool,
}

pub fn equivalence_hypotheses(ineq: &Inequality) -> Result<bool> {
    if has_plus(ineq) {
        return Err(Error::PlusNotAllowed);
    }
    Ok(is_regular(&ineq.lhs)? && ineq.rhs.compose_count() <= 1)
}

pub fn equivalence_report(a: &FiniteAlgebra, ineq: &Inequality, opts: &CheckOptions) -> Result<EquivalenceReport> {
    let hypotheses_hold = equivalence_hypotheses(ineq)?;
    let crr = check_variety(a, ineq, Mode::Crr, opts)?;
    let con = check_variety(a, ineq, Mode::Con, opts)?;
    let agree = crr.holds == con.holds;
    Ok(EquivalenceReport {
        crr,
        con,
        hypotheses_hold,
        agree,
        discrepancy: hypotheses_hold && !agree,
    })
}

pub const THR_FIRST: &str = "R & (S o T) <= (R & S) o T";
pub const THR_SECOND: &str = "R & (S o T) <= (R & S) o (R & T)";

/// True iff `A` satisfies both or neither of [`THR_FIRST`] and
/// [`THR_SECOND`] over compatible reflexive relations.
pub fn thr_pair_check(a: &FiniteAlgebra, opts: &CheckOptions) -> Result<bool> {
    let first = parse_inequality(THR_FIRST)?;
    let second = parse_inequality(THR_SECOND)?;
    Ok(check_algebra(a, &first, Mode::Crr, opts)?.holds == check_algebra(a, &second, Mode::Crr, opts)?.holds)
}
