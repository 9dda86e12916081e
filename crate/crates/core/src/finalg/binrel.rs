use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A binary relation on `{0, …, n-1}` stored as an `n × n` bit matrix, one
/// row of 64-bit words per element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinRel {
    n: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BinRel {
    pub fn empty(n: usize) -> Self {
        let stride = n.div_ceil(WORD);
        BinRel {
            n,
            stride,
            bits: vec![0; n * stride],
        }
    }

    /// The diagonal `Δ`.
    pub fn diagonal(n: usize) -> Self {
        let mut r = Self::empty(n);
        for a in 0..n {
            r.insert(a, a);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        let mut r = Self::empty(n);
        for a in 0..n {
            for b in 0..n {
                r.insert(a, b);
            }
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut r = Self::empty(n);
        for (a, b) in pairs {
            for e in [a, b] {
                if e >= n {
                    return Err(Error::OutOfRange { element: e, size: n });
                }
            }
            r.insert(a, b);
        }
        Ok(r)
    }

    /// Parses a 0/1 matrix given as rows.
    pub fn from_matrix(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut r = Self::empty(n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (b, &v) in row.iter().enumerate() {
                if v != 0 {
                    r.insert(a, b);
                }
            }
        }
        Ok(r)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.stride + b / WORD] >> (b % WORD) & 1 == 1
    }

    /// Inserts `(a, b)`; returns true if the pair was new.
    #[inline]
    pub fn insert(&mut self, a: usize, b: usize) -> bool {
        let w = &mut self.bits[a * self.stride + b / WORD];
        let mask = 1u64 << (b % WORD);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    pub fn remove(&mut self, a: usize, b: usize) {
        self.bits[a * self.stride + b / WORD] &= !(1u64 << (b % WORD));
    }

    fn row(&self, a: usize) -> &[u64] {
        &self.bits[a * self.stride..(a + 1) * self.stride]
    }

    /// Elements `b` with `(a, b)` in the relation, ascending.
    pub fn successors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(a).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + t)
            })
        })
    }

    /// All pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| self.successors(a).map(move |b| (a, b)))
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn check_same(&self, other: &BinRel) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn union(&self, other: &BinRel) -> Result<BinRel> {
        self.check_same(other)?;
        let mut r = self.clone();
        r.bits.iter_mut().zip(&other.bits).for_each(|(a, b)| *a |= b);
        Ok(r)
    }

    pub fn intersection(&self, other: &BinRel) -> Result<BinRel> {
        self.check_same(other)?;
        let mut r = self.clone();
        r.bits.iter_mut().zip(&other.bits).for_each(|(a, b)| *a &= b);
        Ok(r)
    }

    pub fn is_subset(&self, other: &BinRel) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0))
    }

    pub fn converse(&self) -> BinRel {
        let mut r = BinRel::empty(self.n);
        for (a, b) in self.pairs() {
            r.insert(b, a);
        }
        r
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|a| self.contains(a, a))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(a, b)| self.contains(b, a))
    }

    pub fn is_transitive(&self) -> bool {
        compose(self, self)
            .map(|c| c.is_subset(self).unwrap_or(false))
            .unwrap_or(false)
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_reflexive() && self.is_symmetric() && self.is_transitive()
    }

    /// Transitive closure by Warshall's algorithm on bit rows.
    pub fn transitive_closure(&self) -> BinRel {
        let mut r = self.clone();
        let s = self.stride;
        for k in 0..self.n {
            let row_k: Vec<u64> = r.row(k).to_vec();
            for i in 0..self.n {
                if r.contains(i, k) {
                    let row_i = &mut r.bits[i * s..(i + 1) * s];
                    row_i.iter_mut().zip(&row_k).for_each(|(a, b)| *a |= b);
                }
            }
        }
        r
    }

    /// Rows as 0/1 vectors, for serialization.
    pub fn to_matrix(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|a| (0..self.n).map(|b| self.contains(a, b) as u8).collect())
            .collect()
    }
}

impl fmt::Debug for BinRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinRel({}; ", self.n)?;
        f.debug_set().entries(self.pairs()).finish()?;
        write!(f, ")")
    }
}

/// Relational product `R ∘ T = {(a, c) | ∃b. (a, b) ∈ R, (b, c) ∈ T}`.
pub fn compose(r: &BinRel, t: &BinRel) -> Result<BinRel> {
    r.check_same(t)?;
    let mut out = BinRel::empty(r.n);
    let s = r.stride;
    for a in 0..r.n {
        let dst = &mut out.bits[a * s..(a + 1) * s];
        for b in r.successors(a) {
            dst.iter_mut().zip(t.row(b)).for_each(|(x, y)| *x |= y);
        }
    }
    Ok(out)
}

/// The alternating product `R ∘ T ∘ R ∘ …` with `k` factors.
pub fn kfold(r: &BinRel, t: &BinRel, k: usize) -> Result<BinRel> {
    if k < 1 {
        return Err(Error::InvalidK { k, min: 1 });
    }
    r.check_same(t)?;
    let mut acc = r.clone();
    for i in 1..k {
        acc = compose(&acc, if i % 2 == 0 { r } else { t })?;
    }
    Ok(acc)
}

/// `R + T` together with its stabilization index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlusResult {
    pub relation: BinRel,
    /// Least `k ≥ 1` such that the union of the `i`-fold products for
    /// `1 ≤ i ≤ k` is already all of `R + T`.
    pub stabilization: usize,
}

/// `R + T = ⋃_{i ≥ 1} R ∘^(i) T`.
///
/// The sequence of products is determined by the pair (current product,
/// parity of `i`), so it is eventually periodic; iteration stops at the
/// first repeated state, after which no new pairs can appear.
pub fn plus(r: &BinRel, t: &BinRel) -> Result<PlusResult> {
    r.check_same(t)?;
    let mut seen: HashSet<(BinRel, bool)> = HashSet::new();
    let mut current = r.clone();
    let mut union = r.clone();
    let mut stabilization = 1;
    let mut i = 1;
    loop {
        if !seen.insert((current.clone(), i % 2 == 0)) {
            break;
        }
        current = compose(&current, if i % 2 == 0 { r } else { t })?;
        i += 1;
        let grown = union.union(&current)?;
        if grown != union {
            union = grown;
            stabilization = i;
        }
    }
    Ok(PlusResult {
        relation: union,
        stabilization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(n: usize, pairs: &[(usize, usize)]) -> BinRel {
        BinRel::from_pairs(n, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn compose_basics() {
        let r = rel(3, &[(0, 1), (1, 2), (2, 2)]);
        assert_eq!(compose(&BinRel::diagonal(3), &r).unwrap(), r);
        assert_eq!(compose(&BinRel::empty(3), &r).unwrap(), BinRel::empty(3));
        let r = rel(2, &[(0, 0), (1, 1), (0, 1)]);
        let t = rel(2, &[(0, 0), (1, 1), (1, 0)]);
        assert_eq!(compose(&r, &t).unwrap(), BinRel::full(2));
        assert!(compose(&r, &BinRel::empty(3)).is_err());
    }

    #[test]
    fn kfold_matches_definition() {
        let r = rel(4, &[(0, 1), (2, 3)]);
        let t = rel(4, &[(1, 2), (3, 0)]);
        assert_eq!(kfold(&r, &t, 1).unwrap(), r);
        assert_eq!(kfold(&r, &t, 2).unwrap(), compose(&r, &t).unwrap());
        let rtr = compose(&compose(&r, &t).unwrap(), &r).unwrap();
        assert_eq!(kfold(&r, &t, 3).unwrap(), rtr);
        assert_eq!(kfold(&r, &t, 3).unwrap(), rel(4, &[(0, 3), (2, 1)]));
        assert!(kfold(&r, &t, 0).is_err());
    }

    #[test]
    fn plus_fixed_points() {
        let d = BinRel::diagonal(3);
        let p = plus(&d, &d).unwrap();
        assert_eq!(p.relation, d);
        assert_eq!(p.stabilization, 1);
        let r = rel(3, &[(0, 1), (1, 1)]);
        assert_eq!(plus(&r, &BinRel::empty(3)).unwrap().relation, r);
    }

    #[test]
    fn plus_of_non_reflexive_cycle() {
        // R: 0->1, T: 1->0. Products alternate and the union is {(0,1),(0,0)}.
        let r = rel(2, &[(0, 1)]);
        let t = rel(2, &[(1, 0)]);
        let p = plus(&r, &t).unwrap();
        assert_eq!(p.relation, rel(2, &[(0, 1), (0, 0)]));
        assert_eq!(p.stabilization, 2);
    }

    #[test]
    fn bit_rows_span_words() {
        let n = 130;
        let mut r = BinRel::empty(n);
        r.insert(0, 129);
        r.insert(129, 64);
        assert!(r.contains(0, 129));
        let c = compose(&r, &r).unwrap();
        assert_eq!(c.pairs().collect::<Vec<_>>(), vec![(0, 64)]);
        assert_eq!(r.transitive_closure().count(), 3);
    }

    #[test]
    fn predicates() {
        let e = rel(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)]);
        assert!(e.is_equivalence());
        let o = rel(2, &[(0, 0), (1, 1), (0, 1)]);
        assert!(o.is_reflexive() && !o.is_symmetric() && o.is_transitive());
        assert_eq!(o.converse(), rel(2, &[(0, 0), (1, 1), (1, 0)]));
        assert_eq!(BinRel::from_matrix(&o.to_matrix()).unwrap(), o);
    }
}
