use crate::error::{Error, Result};

use super::algebra::{for_each_tuple, FiniteAlgebra, Operation};
use super::closure::{Closure, Provenance, Term};

/// Default element cap for free algebras; overridable via `MALCEV_CAP` in the CLI.
pub const DEFAULT_FREE_CAP: usize = 200_000;

/// Largest operation table [`FreeAlgebra::to_algebra`] will materialize.
pub const DEFAULT_TABLE_CAP: usize = 1 << 24;

/// The `m`-generated free algebra of the variety generated by `A`, realized
/// as the term functions `A^m → A`. Each element is the vector of its values
/// at the points of `A^m` in lexicographic order.
#[derive(Clone, Debug)]
pub struct FreeAlgebra {
    base: FiniteAlgebra,
    m: usize,
    closure: Closure,
}

/// Points of `A^m` in lexicographic order.
pub fn points(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_tuple(n, m, |t| out.push(t.to_vec()));
    out
}

pub fn free_algebra(a: &FiniteAlgebra, m: usize, size_cap: usize) -> Result<FreeAlgebra> {
    if m == 0 {
        return Err(Error::InvalidAlgebra("free algebra needs at least one generator".into()));
    }
    let width = u32::try_from(m)
        .ok()
        .and_then(|m| a.size.checked_pow(m))
        .filter(|&w| w <= DEFAULT_TABLE_CAP)
        .ok_or(Error::CapExceeded {
            what: "free algebra point set",
            cap: DEFAULT_TABLE_CAP,
            partial: 0,
        })?;
    let pts = points(a.size, m);
    let gens: Vec<Vec<u32>> = (0..m)
        .map(|i| pts.iter().map(|p| p[i] as u32).collect())
        .collect();
    let closure = Closure::generate(a, width, &gens, size_cap, "free algebra")?;
    Ok(FreeAlgebra {
        base: a.clone(),
        m,
        closure,
    })
}

impl FreeAlgebra {
    pub fn base(&self) -> &FiniteAlgebra {
        &self.base
    }

    pub fn generator_count(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.closure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closure.is_empty()
    }

    /// Element index of the projection `x_i` (1-based).
    pub fn generator(&self, i: usize) -> usize {
        self.closure.generator_elements()[i - 1]
    }

    /// Function vector of element `e`.
    pub fn element(&self, e: usize) -> &[u32] {
        self.closure.element(e)
    }

    pub fn find(&self, v: &[u32]) -> Option<usize> {
        self.closure.find(v)
    }

    pub fn provenance(&self, e: usize) -> &Provenance {
        self.closure.provenance(e)
    }

    pub fn term(&self, e: usize) -> Term {
        self.closure.term(&self.base, e)
    }

    /// The free algebra as a finite algebra on element indices.
    pub fn to_algebra(&self, table_cap: usize) -> Result<FiniteAlgebra> {
        let size = self.len();
        let width = self.closure.width();
        let n = self.base.size;
        let mut ops = Vec::with_capacity(self.base.operations.len());
        let mut buf = vec![0u32; width];
        for op in &self.base.operations {
            let entries = u32::try_from(op.arity)
                .ok()
                .and_then(|k| size.checked_pow(k))
                .filter(|&e| e <= table_cap)
                .ok_or(Error::CapExceeded {
                    what: "free algebra operation table",
                    cap: table_cap,
                    partial: size,
                })?;
            let mut table = Vec::with_capacity(entries);
            for_each_tuple(size, op.arity, |args| {
                for (coord, slot) in buf.iter_mut().enumerate() {
                    let mut idx = 0usize;
                    for &a in args {
                        idx = idx * n + self.closure.element(a)[coord] as usize;
                    }
                    *slot = op.table[idx];
                }
                let e = self.closure.find(&buf).expect("free algebra is closed");
                table.push(e as u32);
            });
            ops.push(Operation {
                name: op.name.clone(),
                arity: op.arity,
                table,
            });
        }
        Ok(FiniteAlgebra {
            name: format!("F_{}({})", self.base.name, self.m),
            size,
            operations: ops,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finalg::algebra::catalog;

    fn free(name: &str, m: usize) -> FreeAlgebra {
        free_algebra(&catalog(name).unwrap(), m, DEFAULT_FREE_CAP).unwrap()
    }

    #[test]
    fn known_sizes() {
        assert_eq!(free("slat2", 2).len(), 3);
        assert_eq!(free("z2", 2).len(), 4);
        assert_eq!(free("z2", 3).len(), 8);
        assert_eq!(free("slat2", 3).len(), 7);
        assert_eq!(free("lat2", 3).len(), 18);
        assert_eq!(free("bool2", 2).len(), 16);
        assert_eq!(free("bool2", 3).len(), 256);
        assert_eq!(free("bare3", 3).len(), 3);
    }

    #[test]
    fn z2_constant_zero_is_x_plus_x() {
        let f = free("z2", 2);
        let zero = f.find(&[0, 0, 0, 0]).unwrap();
        assert_eq!(f.term(zero).to_string(), "add(x1, x1)");
    }

    #[test]
    fn contains_projections() {
        for name in ["bare2", "slat2", "bool2"] {
            let f = free(name, 1);
            assert_eq!(f.element(f.generator(1)), &[0, 1]);
        }
    }

    #[test]
    fn provenance_reevaluates_to_element() {
        let f = free("lat2", 3);
        let pts = points(2, 3);
        for e in 0..f.len() {
            let t = f.term(e);
            let vals: Vec<u32> = pts.iter().map(|p| t.eval(f.base(), p) as u32).collect();
            assert_eq!(vals.as_slice(), f.element(e));
        }
    }

    #[test]
    fn to_algebra_tables_match_pointwise() {
        let f = free("z2", 2);
        let a = f.to_algebra(DEFAULT_TABLE_CAP).unwrap();
        let (x, y) = (f.generator(1), f.generator(2));
        let s = a.apply(0, &[x, y]);
        assert_eq!(f.element(s), &[0, 1, 1, 0]);
    }

    #[test]
    fn cap_exceeded_is_reported() {
        let err = free_algebra(&catalog("bool2").unwrap(), 3, 100).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { partial: 100, .. }));
    }
}
