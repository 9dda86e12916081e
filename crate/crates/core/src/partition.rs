//! Equivalence relations generated by pair lists.

/// Union-find with path halving and union by size over `0..len`.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; returns false if they were already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// A partition of `{1, …, m}`. Classes are sorted and listed by their
/// minimum element, which is the class representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    classes: Vec<Vec<usize>>,
    rep: Vec<usize>,
}

impl VertexPartition {
    pub fn discrete(m: usize) -> Self {
        VertexPartition {
            classes: (1..=m).map(|i| vec![i]).collect(),
            rep: (1..=m).collect(),
        }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }

    /// Minimum element of the class of `i` (1-based).
    pub fn representative(&self, i: usize) -> usize {
        self.rep[i - 1]
    }

    pub fn max_class_size(&self) -> usize {
        self.classes.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// `Eqv(pairs)` over the domain `{1, …, m}`.
pub fn eqv(pairs: &[(usize, usize)], m: usize) -> VertexPartition {
    let mut uf = UnionFind::new(m);
    for &(i, j) in pairs {
        assert!(i >= 1 && i <= m && j >= 1 && j <= m, "pair ({i},{j}) outside 1..={m}");
        uf.union(i - 1, j - 1);
    }
    let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); m];
    for i in 0..m {
        let r = uf.find(i);
        by_root[r].push(i + 1);
    }
    let mut classes: Vec<Vec<usize>> = by_root.into_iter().filter(|c| !c.is_empty()).collect();
    classes.sort_by_key(|c| c[0]);
    let mut rep = vec![0; m];
    for class in &classes {
        for &i in class {
            rep[i - 1] = class[0];
        }
    }
    VertexPartition { classes, rep }
}
