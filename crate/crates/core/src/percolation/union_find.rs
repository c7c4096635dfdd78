/// Disjoint sets with union by size and path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    largest: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            largest: usize::from(n > 0),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns false if already joined.
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
        self.largest = self.largest.max(self.size[ra]);
        true
    }

    pub fn largest(&self) -> usize {
        self.largest
    }

    /// Sizes of all sets, one entry per set.
    pub fn component_sizes(&self) -> Vec<usize> {
        (0..self.parent.len())
            .filter(|&v| self.parent[v] == v)
            .map(|v| self.size[v])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_tracks_largest() {
        let mut uf = UnionFind::new(6);
        assert_eq!(uf.largest(), 1);
        assert!(uf.union(0, 1));
        assert!(uf.union(2, 3));
        assert!(uf.union(1, 3));
        assert!(!uf.union(0, 2));
        assert_eq!(uf.largest(), 4);
        let mut sizes = uf.component_sizes();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 4]);
        assert_eq!(UnionFind::new(0).largest(), 0);
    }
}
