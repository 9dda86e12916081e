//! Compatible relations of a finite algebra: tests, generation, enumeration.

use crate::error::{Error, Result};
use crate::partition::{UnionFind, VertexPartition};

use super::algebra::{for_each_tuple, FiniteAlgebra};
use super::binrel::BinRel;

/// Default for [`enumerate_crr`] / [`enumerate_con`]: `n(n-1) ≤ 12`, so `n ≤ 4`.
pub const DEFAULT_ENUM_BOUND: usize = 12;

fn check_size(a: &FiniteAlgebra, r: &BinRel) -> Result<()> {
    if a.size != r.size() {
        return Err(Error::SizeMismatch {
            expected: a.size,
            found: r.size(),
        });
    }
    Ok(())
}

fn check_pairs(a: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Result<()> {
    for &(x, y) in pairs {
        for e in [x, y] {
            if e >= a.size {
                return Err(Error::OutOfRange { element: e, size: a.size });
            }
        }
    }
    Ok(())
}

/// True iff `r` is a subuniverse of `A × A`.
pub fn is_compatible(a: &FiniteAlgebra, r: &BinRel) -> Result<bool> {
    check_size(a, r)?;
    let pairs: Vec<(usize, usize)> = r.pairs().collect();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (oi, op) in a.operations.iter().enumerate() {
        let mut ok = true;
        for_each_tuple(pairs.len(), op.arity, |t| {
            if !ok {
                return;
            }
            left.clear();
            right.clear();
            left.extend(t.iter().map(|&i| pairs[i].0));
            right.extend(t.iter().map(|&i| pairs[i].1));
            if !r.contains(a.apply(oi, &left), a.apply(oi, &right)) {
                ok = false;
            }
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Crg_A(pairs)`: the least reflexive compatible relation containing `pairs`.
pub fn crg(a: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Result<BinRel> {
    check_pairs(a, pairs)?;
    let n = a.size;
    let mut rel = BinRel::diagonal(n);
    let mut list: Vec<(usize, usize)> = (0..n).map(|x| (x, x)).collect();
    for &(x, y) in pairs {
        if rel.insert(x, y) {
            list.push((x, y));
        }
    }
    subuniverse_of_square(a, &mut rel, &mut list);
    Ok(rel)
}

/// Closes `rel` (whose pairs are listed in `list`) under the operations of
/// `a` acting coordinatewise. Each tuple of pairs is visited once, when its
/// largest list index is processed.
fn subuniverse_of_square(a: &FiniteAlgebra, rel: &mut BinRel, list: &mut Vec<(usize, usize)>) {
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut i = 0;
    while i < list.len() {
        for (oi, op) in a.operations.iter().enumerate() {
            let k = op.arity;
            if k == 0 {
                continue;
            }
            if k == 2 {
                let n = a.size;
                for j in 0..=i {
                    for (u, v) in [(i, j), (j, i)] {
                        let x = op.table[list[u].0 * n + list[v].0] as usize;
                        let y = op.table[list[u].1 * n + list[v].1] as usize;
                        if rel.insert(x, y) {
                            list.push((x, y));
                        }
                    }
                }
                continue;
            }
            // position p holds i; earlier positions < i, later positions <= i
            for p in 0..k {
                for_each_tuple(i, p, |pre| {
                    for_each_tuple(i + 1, k - p - 1, |post| {
                        left.clear();
                        right.clear();
                        for &j in pre.iter().chain(std::iter::once(&i)).chain(post.iter()) {
                            left.push(list[j].0);
                            right.push(list[j].1);
                        }
                        let x = a.apply(oi, &left);
                        let y = a.apply(oi, &right);
                        if rel.insert(x, y) {
                            list.push((x, y));
                        }
                    });
                });
            }
        }
        i += 1;
    }
}

/// `Cg_A(pairs)`: the least congruence containing `pairs`.
///
/// Union-find closed under translations: whenever two classes merge through
/// `(x, y)`, every basic operation with one argument slot set to `x` resp. `y`
/// and the remaining slots equal yields a pair that must also be merged.
pub fn cg(a: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Result<BinRel> {
    check_pairs(a, pairs)?;
    let n = a.size;
    let mut uf = UnionFind::new(n);
    let mut queue: Vec<(usize, usize)> = Vec::new();
    for &(x, y) in pairs {
        if uf.union(x, y) {
            queue.push((x, y));
        }
    }
    let mut args = Vec::new();
    while let Some((x, y)) = queue.pop() {
        for (oi, op) in a.operations.iter().enumerate() {
            let k = op.arity;
            for pos in 0..k {
                for_each_tuple(n, k - 1, |rest| {
                    args.clear();
                    args.extend_from_slice(&rest[..pos]);
                    args.push(x);
                    args.extend_from_slice(&rest[pos..]);
                    let u = a.apply(oi, &args);
                    args[pos] = y;
                    let v = a.apply(oi, &args);
                    if uf.union(u, v) {
                        queue.push((u, v));
                    }
                });
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|e| uf.find(e)).collect();
    let mut rel = BinRel::empty(n);
    for x in 0..n {
        for y in 0..n {
            if roots[x] == roots[y] {
                rel.insert(x, y);
            }
        }
    }
    Ok(rel)
}

/// `Eqv(pairs)` on `{1, …, m}`.
pub fn eqv(pairs: &[(usize, usize)], m: usize) -> VertexPartition {
    crate::partition::eqv(pairs, m)
}

fn check_bound(a: &FiniteAlgebra, bound: usize) -> Result<()> {
    let n = a.size;
    if n * (n - 1) > bound {
        return Err(Error::EnumerationBound { size: n, bound });
    }
    Ok(())
}

/// All reflexive compatible relations, in increasing order of the bitmask
/// over off-diagonal pairs taken row-major.
pub fn enumerate_crr(a: &FiniteAlgebra, bound: usize) -> Result<impl Iterator<Item = BinRel> + '_> {
    check_bound(a, bound)?;
    let n = a.size;
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let total: u64 = 1 << off.len();
    Ok((0..total).filter_map(move |mask| {
        let mut r = BinRel::diagonal(n);
        for (bit, &(x, y)) in off.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                r.insert(x, y);
            }
        }
        is_compatible(a, &r).unwrap_or(false).then_some(r)
    }))
}

/// All congruences, in lexicographic order of their restricted growth strings.
pub fn enumerate_con(a: &FiniteAlgebra, bound: usize) -> Result<impl Iterator<Item = BinRel> + '_> {
    check_bound(a, bound)?;
    let n = a.size;
    let mut rgs: Option<Vec<usize>> = Some(vec![0; n]);
    let partitions = std::iter::from_fn(move || {
        let current = rgs.take()?;
        rgs = next_rgs(&current);
        Some(current)
    });
    Ok(partitions.filter_map(move |blocks| {
        let mut r = BinRel::empty(n);
        for x in 0..n {
            for y in 0..n {
                if blocks[x] == blocks[y] {
                    r.insert(x, y);
                }
            }
        }
        is_compatible(a, &r).unwrap_or(false).then_some(r)
    }))
}

fn next_rgs(s: &[usize]) -> Option<Vec<usize>> {
    let n = s.len();
    let mut s = s.to_vec();
    for i in (1..n).rev() {
        let max_prefix = s[..i].iter().copied().max().unwrap_or(0);
        if s[i] <= max_prefix {
            s[i] += 1;
            for x in s.iter_mut().skip(i + 1) {
                *x = 0;
            }
            return Some(s);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finalg::algebra::catalog;

    fn rel(n: usize, pairs: &[(usize, usize)]) -> BinRel {
        BinRel::from_pairs(n, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn compatibility_examples() {
        for name in ["z2", "lat2", "bool2", "bare3"] {
            let a = catalog(name).unwrap();
            assert!(is_compatible(&a, &BinRel::diagonal(a.size)).unwrap());
            assert!(is_compatible(&a, &BinRel::full(a.size)).unwrap());
        }
        let order = rel(2, &[(0, 0), (1, 1), (0, 1)]);
        assert!(is_compatible(&catalog("lat2").unwrap(), &order).unwrap());
        assert!(!is_compatible(&catalog("z2").unwrap(), &order).unwrap());
        assert!(!is_compatible(&catalog("bool2").unwrap(), &order).unwrap());
        assert!(is_compatible(&catalog("z2").unwrap(), &BinRel::diagonal(3)).is_err());
    }

    #[test]
    fn constants_must_be_reflexive_points() {
        let bool2 = catalog("bool2").unwrap();
        assert!(!is_compatible(&bool2, &BinRel::empty(2)).unwrap());
    }

    #[test]
    fn crg_examples() {
        let z2 = catalog("z2").unwrap();
        assert_eq!(crg(&z2, &[]).unwrap(), BinRel::diagonal(2));
        assert_eq!(crg(&z2, &[(0, 1)]).unwrap(), BinRel::full(2));
        let bare = catalog("bare3").unwrap();
        assert_eq!(crg(&bare, &[(0, 2)]).unwrap(), rel(3, &[(0, 0), (1, 1), (2, 2), (0, 2)]));
        let lat = catalog("lat2").unwrap();
        assert_eq!(crg(&lat, &[(0, 1)]).unwrap(), rel(2, &[(0, 0), (1, 1), (0, 1)]));
        assert!(matches!(crg(&lat, &[(0, 2)]), Err(Error::OutOfRange { element: 2, size: 2 })));
    }

    #[test]
    fn cg_examples() {
        let lat = catalog("lat2").unwrap();
        assert_eq!(cg(&lat, &[]).unwrap(), BinRel::diagonal(2));
        assert_eq!(cg(&lat, &[(0, 1)]).unwrap(), BinRel::full(2));
        let bare = catalog("bare3").unwrap();
        let c = cg(&bare, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(c, BinRel::full(3));
    }

    #[test]
    fn cg_respects_operations() {
        // f(x) = x+1 mod 4; collapsing 0,2 forces 1~3.
        let a = FiniteAlgebra::new(
            "c4",
            4,
            vec![crate::finalg::Operation {
                name: "s".into(),
                arity: 1,
                table: vec![1, 2, 3, 0],
            }],
        )
        .unwrap();
        let c = cg(&a, &[(0, 2)]).unwrap();
        assert!(c.contains(1, 3) && c.contains(3, 1));
        assert!(!c.contains(0, 1));
        assert_eq!(c.count(), 8);
    }

    #[test]
    fn eqv_partition() {
        assert_eq!(eqv(&[(1, 2), (2, 3)], 4).classes(), &[vec![1, 2, 3], vec![4]]);
    }

    #[test]
    fn crr_counts() {
        let bare2 = catalog("bare2").unwrap();
        assert_eq!(enumerate_crr(&bare2, DEFAULT_ENUM_BOUND).unwrap().count(), 4);
        // lat2: Δ, ≤, ≥, full are all compatible
        let lat2 = catalog("lat2").unwrap();
        assert_eq!(enumerate_crr(&lat2, DEFAULT_ENUM_BOUND).unwrap().count(), 4);
        // z2 and bool2: only Δ and full
        assert_eq!(enumerate_crr(&catalog("z2").unwrap(), 12).unwrap().count(), 2);
        assert_eq!(enumerate_crr(&catalog("bool2").unwrap(), 12).unwrap().count(), 2);
        assert_eq!(enumerate_crr(&catalog("bare3").unwrap(), 12).unwrap().count(), 64);
        assert!(matches!(
            enumerate_crr(&FiniteAlgebra::bare(5), 12).map(|_| ()),
            Err(Error::EnumerationBound { size: 5, bound: 12 })
        ));
    }

    #[test]
    fn con_enumeration() {
        let bare3 = catalog("bare3").unwrap();
        let cons: Vec<_> = enumerate_con(&bare3, 12).unwrap().collect();
        assert_eq!(cons.len(), 5);
        assert!(cons.iter().all(|c| c.is_equivalence()));
        let z2 = catalog("z2").unwrap();
        for c in enumerate_con(&z2, 12).unwrap() {
            assert!(c.is_equivalence() && is_compatible(&z2, &c).unwrap());
        }
        assert_eq!(enumerate_con(&FiniteAlgebra::bare(4), 12).unwrap().count(), 15);
    }
}
