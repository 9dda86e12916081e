//! Subuniverses of a direct power `A^D` generated by a list of vectors,
//! built breadth-first with one provenance record per element.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

use super::algebra::{for_each_tuple, FiniteAlgebra};

/// How an element was first obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// The `i`-th generator (0-based).
    Generator(usize),
    /// A basic operation (by index) applied to earlier elements.
    Applied { op: usize, args: Vec<usize> },
}

/// A term over the operation symbols of an algebra, in variables `x1, x2, …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    /// `x_i`, 1-based.
    Var(usize),
    App { op: usize, name: String, args: Vec<Term> },
}

impl Term {
    pub fn eval(&self, alg: &FiniteAlgebra, values: &[usize]) -> usize {
        match self {
            Term::Var(i) => values[i - 1],
            Term::App { op, args, .. } => {
                let a: Vec<usize> = args.iter().map(|t| t.eval(alg, values)).collect();
                alg.apply(*op, &a)
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App { args, .. } => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::App { name, args, .. } if args.is_empty() => f.write_str(name),
            Term::App { name, args, .. } => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Largest power `n^width` indexed by a direct-address table.
const DENSE_LIMIT: usize = 1 << 22;

#[derive(Clone, Debug)]
enum Index {
    /// Slot `Σ v_i n^(width-1-i)` holds the element index, or `u32::MAX`.
    Dense { n: usize, slots: Vec<u32> },
    Sparse(HashMap<Vec<u32>, usize>),
}

impl Index {
    fn new(n: usize, width: usize) -> Self {
        match u32::try_from(width).ok().and_then(|w| n.checked_pow(w)) {
            Some(full) if full <= DENSE_LIMIT => Index::Dense {
                n,
                slots: vec![u32::MAX; full],
            },
            _ => Index::Sparse(HashMap::new()),
        }
    }

    fn key(n: usize, v: &[u32]) -> usize {
        v.iter().fold(0, |k, &x| k * n + x as usize)
    }

    fn get(&self, v: &[u32]) -> Option<usize> {
        match self {
            Index::Dense { n, slots } => match slots.get(Self::key(*n, v)) {
                Some(&e) if e != u32::MAX => Some(e as usize),
                _ => None,
            },
            Index::Sparse(map) => map.get(v).copied(),
        }
    }

    fn insert(&mut self, v: &[u32], e: usize) {
        match self {
            Index::Dense { n, slots } => {
                let k = Self::key(*n, v);
                slots[k] = u32::try_from(e).expect("element index fits u32");
            }
            Index::Sparse(map) => {
                map.insert(v.to_vec(), e);
            }
        }
    }
}

/// Closure of a set of generator vectors of common width under the basic
/// operations acting coordinatewise.
#[derive(Clone, Debug)]
pub struct Closure {
    width: usize,
    data: Vec<u32>,
    provenance: Vec<Provenance>,
    index: Index,
    generator_elements: Vec<usize>,
}

impl Closure {
    /// Generates the subuniverse; fails once more than `cap` elements exist.
    ///
    /// Rounds are breadth-first: round `r` applies every operation to tuples
    /// that contain at least one element first produced in round `r - 1`, so
    /// the first provenance recorded for an element has minimal depth.
    pub fn generate(
        alg: &FiniteAlgebra,
        width: usize,
        generators: &[Vec<u32>],
        cap: usize,
        what: &'static str,
    ) -> Result<Self> {
        let mut c = Closure {
            width,
            data: Vec::new(),
            provenance: Vec::new(),
            index: Index::new(alg.size, width),
            generator_elements: Vec::with_capacity(generators.len()),
        };
        for (gi, g) in generators.iter().enumerate() {
            assert_eq!(g.len(), width);
            let e = c.insert(g.clone(), Provenance::Generator(gi), cap, what)?;
            c.generator_elements.push(e);
        }
        for (oi, op) in alg.operations.iter().enumerate() {
            if op.arity == 0 {
                let v = vec![op.table[0]; width];
                c.insert(v, Provenance::Applied { op: oi, args: vec![] }, cap, what)?;
            }
        }

        let n = alg.size;
        // once every vector of A^width is present nothing new can appear
        let full = u32::try_from(width).ok().and_then(|w| n.checked_pow(w)).unwrap_or(usize::MAX);
        let mut buf = vec![0u32; width];
        let mut args: Vec<usize> = Vec::new();
        let mut frontier_start = 0;
        loop {
            let end = c.len();
            if frontier_start == end || end == full {
                break;
            }
            for (oi, op) in alg.operations.iter().enumerate() {
                let k = op.arity;
                if k == 0 {
                    continue;
                }
                if k == 2 {
                    // same tuple order as the general case below
                    let fs = frontier_start;
                    let firsts = (fs..end).flat_map(|j| (0..end).map(move |b| (j, b)));
                    let seconds = (0..fs).flat_map(|a| (fs..end).map(move |j| (a, j)));
                    for (x, y) in firsts.chain(seconds) {
                        if c.len() == full {
                            break;
                        }
                        let (dx, dy) = (&c.data[x * width..(x + 1) * width], &c.data[y * width..(y + 1) * width]);
                        for ((slot, &u), &v) in buf.iter_mut().zip(dx).zip(dy) {
                            *slot = op.table[u as usize * n + v as usize];
                        }
                        if c.index.get(&buf).is_none() {
                            let prov = Provenance::Applied { op: oi, args: vec![x, y] };
                            c.insert(buf.clone(), prov, cap, what)?;
                        }
                    }
                    continue;
                }
                for p in 0..k {
                    let mut failure = None;
                    for_each_tuple(frontier_start, p, |pre| {
                        for j in frontier_start..end {
                            for_each_tuple(end, k - p - 1, |post| {
                                if failure.is_some() || c.len() == full {
                                    return;
                                }
                                args.clear();
                                args.extend_from_slice(pre);
                                args.push(j);
                                args.extend_from_slice(post);
                                for (coord, slot) in buf.iter_mut().enumerate() {
                                    let mut idx = 0usize;
                                    for &a in &args {
                                        idx = idx * n + c.data[a * width + coord] as usize;
                                    }
                                    *slot = op.table[idx];
                                }
                                if c.index.get(&buf).is_none() {
                                    let prov = Provenance::Applied {
                                        op: oi,
                                        args: args.clone(),
                                    };
                                    if let Err(e) = c.insert(buf.clone(), prov, cap, what) {
                                        failure = Some(e);
                                    }
                                }
                            });
                        }
                    });
                    if let Some(e) = failure {
                        return Err(e);
                    }
                }
            }
            frontier_start = end;
        }
        Ok(c)
    }

    fn insert(&mut self, v: Vec<u32>, prov: Provenance, cap: usize, what: &'static str) -> Result<usize> {
        if let Some(e) = self.index.get(&v) {
            return Ok(e);
        }
        if self.len() >= cap {
            return Err(Error::CapExceeded {
                what,
                cap,
                partial: self.len(),
            });
        }
        let e = self.len();
        self.data.extend_from_slice(&v);
        self.index.insert(&v, e);
        self.provenance.push(prov);
        Ok(e)
    }

    pub fn len(&self) -> usize {
        self.provenance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.provenance.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn element(&self, e: usize) -> &[u32] {
        &self.data[e * self.width..(e + 1) * self.width]
    }

    pub fn find(&self, v: &[u32]) -> Option<usize> {
        self.index.get(v)
    }

    pub fn provenance(&self, e: usize) -> &Provenance {
        &self.provenance[e]
    }

    /// Element index of each generator (generators may coincide).
    pub fn generator_elements(&self) -> &[usize] {
        &self.generator_elements
    }

    /// Provenance unfolded into a term; generator `i` becomes `x_{i+1}`.
    pub fn term(&self, alg: &FiniteAlgebra, e: usize) -> Term {
        match &self.provenance[e] {
            Provenance::Generator(i) => Term::Var(i + 1),
            Provenance::Applied { op, args } => Term::App {
                op: *op,
                name: alg.operations[*op].name.clone(),
                args: args.iter().map(|&a| self.term(alg, a)).collect(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finalg::algebra::catalog;

    #[test]
    fn closure_of_z2_vectors() {
        let z2 = catalog("z2").unwrap();
        // x = (0,0,1,1), y = (0,1,0,1): closure is {x, y, x+y, 0}
        let c = Closure::generate(&z2, 4, &[vec![0, 0, 1, 1], vec![0, 1, 0, 1]], 100, "test").unwrap();
        assert_eq!(c.len(), 4);
        let zero = c.find(&[0, 0, 0, 0]).unwrap();
        assert_eq!(c.term(&z2, zero).to_string(), "add(x1, x1)");
        let sum = c.find(&[0, 1, 1, 0]).unwrap();
        assert_eq!(c.term(&z2, sum).depth(), 1);
    }

    #[test]
    fn constants_enter_the_closure() {
        let bool2 = catalog("bool2").unwrap();
        let c = Closure::generate(&bool2, 1, &[vec![0]], 100, "test").unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let bool2 = catalog("bool2").unwrap();
        let gens = vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]];
        let err = Closure::generate(&bool2, 4, &gens, 5, "test").unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cap: 5, partial: 5, .. }));
    }

    #[test]
    fn duplicate_generators_share_an_element() {
        let slat = catalog("slat2").unwrap();
        let c = Closure::generate(&slat, 2, &[vec![0, 1], vec![0, 1]], 10, "test").unwrap();
        assert_eq!(c.generator_elements(), &[0, 0]);
        assert_eq!(c.len(), 1);
    }
}
