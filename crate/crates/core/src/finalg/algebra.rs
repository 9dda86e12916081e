use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One basic operation, as a row-major table of length `n^arity`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Operation {
    pub name: String,
    pub arity: usize,
    pub table: Vec<u32>,
}

/// A finite algebra on `{0, …, n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteAlgebra {
    pub name: String,
    pub size: usize,
    pub operations: Vec<Operation>,
}

impl FiniteAlgebra {
    pub fn new(name: impl Into<String>, size: usize, operations: Vec<Operation>) -> Result<Self> {
        let alg = FiniteAlgebra {
            name: name.into(),
            size,
            operations,
        };
        alg.validate()?;
        Ok(alg)
    }

    /// An algebra with no operations.
    pub fn bare(size: usize) -> Self {
        FiniteAlgebra {
            name: format!("bare{size}"),
            size,
            operations: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::InvalidAlgebra("universe must be non-empty".into()));
        }
        if self.size > u32::MAX as usize {
            return Err(Error::InvalidAlgebra("universe too large".into()));
        }
        let mut names = HashSet::new();
        for op in &self.operations {
            if !names.insert(op.name.as_str()) {
                return Err(Error::InvalidAlgebra(format!("duplicate operation name `{}`", op.name)));
            }
            let expected = u32::try_from(op.arity)
                .ok()
                .and_then(|k| self.size.checked_pow(k))
                .ok_or_else(|| Error::InvalidAlgebra(format!("table of `{}` overflows", op.name)))?;
            if op.table.len() != expected {
                return Err(Error::InvalidAlgebra(format!(
                    "operation `{}` of arity {} needs {} table entries, found {}",
                    op.name,
                    op.arity,
                    expected,
                    op.table.len()
                )));
            }
            if let Some(&bad) = op.table.iter().find(|&&v| v as usize >= self.size) {
                return Err(Error::InvalidAlgebra(format!(
                    "operation `{}` has entry {} outside the universe",
                    op.name, bad
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let alg: FiniteAlgebra =
            serde_json::from_str(text).map_err(|e| Error::InvalidAlgebra(e.to_string()))?;
        alg.validate()?;
        Ok(alg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("algebra serializes")
    }

    #[inline]
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        let o = &self.operations[op];
        debug_assert_eq!(args.len(), o.arity);
        let mut idx = 0;
        for &a in args {
            idx = idx * self.size + a;
        }
        o.table[idx] as usize
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.operations.iter().position(|o| o.name == name)
    }

    pub fn max_arity(&self) -> usize {
        self.operations.iter().map(|o| o.arity).max().unwrap_or(0)
    }
}

fn op(name: &str, arity: usize, table: &[u32]) -> Operation {
    Operation {
        name: name.into(),
        arity,
        table: table.to_vec(),
    }
}

/// Names accepted by [`catalog`].
pub const CATALOG: &[&str] = &["bare2", "bare3", "z2", "lat2", "slat2", "bool2"];

/// Built-in algebras by name.
pub fn catalog(name: &str) -> Option<FiniteAlgebra> {
    let (size, ops) = match name {
        "bare2" => (2, vec![]),
        "bare3" => (3, vec![]),
        "z2" => (2, vec![op("add", 2, &[0, 1, 1, 0])]),
        "lat2" => (2, vec![op("meet", 2, &[0, 0, 0, 1]), op("join", 2, &[0, 1, 1, 1])]),
        "slat2" => (2, vec![op("meet", 2, &[0, 0, 0, 1])]),
        "bool2" => (
            2,
            vec![
                op("meet", 2, &[0, 0, 0, 1]),
                op("join", 2, &[0, 1, 1, 1]),
                op("not", 1, &[1, 0]),
                op("zero", 0, &[0]),
                op("one", 0, &[1]),
            ],
        ),
        _ => return None,
    };
    Some(FiniteAlgebra {
        name: name.into(),
        size,
        operations: ops,
    })
}

/// Calls `f` on every tuple in `0..n` of length `k`, in lexicographic order.
pub fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut t = vec![0usize; k];
    if k > 0 && n == 0 {
        return;
    }
    loop {
        f(&t);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}
