use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::relterm::{RelTerm, VarId};

use super::binrel::{compose, plus, BinRel};

/// Variable assignment for [`eval_term`].
pub trait RelEnv {
    fn relation(&self, v: &VarId) -> Option<&BinRel>;
}

impl RelEnv for HashMap<VarId, BinRel> {
    fn relation(&self, v: &VarId) -> Option<&BinRel> {
        self.get(v)
    }
}

impl RelEnv for BTreeMap<VarId, BinRel> {
    fn relation(&self, v: &VarId) -> Option<&BinRel> {
        self.get(v)
    }
}

/// Relations indexed by variable index: slot `i - 1` holds `X_i`.
pub struct IndexedEnv<'a>(pub &'a [&'a BinRel]);

impl RelEnv for IndexedEnv<'_> {
    fn relation(&self, v: &VarId) -> Option<&BinRel> {
        self.0.get(v.index() - 1).copied()
    }
}

/// Evaluates `t`: `∧` is intersection, `∘` composition, `+` the full union
/// of alternating products.
pub fn eval_term(t: &RelTerm, env: &impl RelEnv) -> Result<BinRel> {
    eval_with_stabilization(t, env).map(|(r, _)| r)
}

/// Like [`eval_term`], also returning the largest stabilization index over
/// all `+` nodes (1 when the term is `+`-free).
pub fn eval_with_stabilization(t: &RelTerm, env: &impl RelEnv) -> Result<(BinRel, usize)> {
    match t {
        RelTerm::Var(v) => env
            .relation(v)
            .cloned()
            .map(|r| (r, 1))
            .ok_or_else(|| Error::UnboundVariable(v.display_name())),
        RelTerm::Meet(a, b) => {
            let (ra, ka) = eval_with_stabilization(a, env)?;
            let (rb, kb) = eval_with_stabilization(b, env)?;
            Ok((ra.intersection(&rb)?, ka.max(kb)))
        }
        RelTerm::Compose(a, b) => {
            let (ra, ka) = eval_with_stabilization(a, env)?;
            let (rb, kb) = eval_with_stabilization(b, env)?;
            Ok((compose(&ra, &rb)?, ka.max(kb)))
        }
        RelTerm::Plus(a, b) => {
            let (ra, ka) = eval_with_stabilization(a, env)?;
            let (rb, kb) = eval_with_stabilization(b, env)?;
            let p = plus(&ra, &rb)?;
            Ok((p.relation, ka.max(kb).max(p.stabilization)))
        }
    }
}
