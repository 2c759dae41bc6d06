//! Disjoint-set forest with path halving and union by rank, sized for one
//! lattice plus four virtual boundary terminals.

/// Union-find over `n` site indices plus the four virtual terminals
/// (left, right, top, bottom) appended after the sites.
#[derive(Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
    sites: usize,
}

impl UnionFind {
    pub const LEFT: usize = 0;
    pub const RIGHT: usize = 1;
    pub const TOP: usize = 2;
    pub const BOTTOM: usize = 3;

    pub fn new(sites: usize) -> Self {
        let total = sites + 4;
        assert!(total <= u32::MAX as usize);
        let mut uf = UnionFind {
            parent: Vec::with_capacity(total),
            rank: vec![0; total],
            sites,
        };
        uf.parent.extend(0..total as u32);
        uf
    }

    /// Reset to singletons without reallocating.
    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        self.rank.fill(0);
    }

    /// Index of the virtual terminal.
    pub fn terminal(&self, which: usize) -> usize {
        self.sites + which
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        loop {
            let p = self.parent[x] as usize;
            if p == x {
                return x;
            }
            // Path halving.
            let gp = self.parent[p];
            self.parent[x] = gp;
            x = gp as usize;
        }
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb as u32,
            std::cmp::Ordering::Greater => self.parent[rb] = ra as u32,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra as u32;
                self.rank[ra] += 1;
            }
        }
    }

    pub fn connected(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn find_is_idempotent_after_compression() {
        let mut uf = UnionFind::new(10);
        for i in 0..9 {
            uf.union(i, i + 1);
        }
        let root = uf.find(0);
        for i in 0..10 {
            assert_eq!(uf.find(i), root);
            assert_eq!(uf.find(i), uf.find(i)); // stable
        }
    }

    #[test]
    fn union_refines_partitions() {
        let mut uf = UnionFind::new(6);
        uf.union(0, 1);
        uf.union(2, 3);
        assert!(uf.connected(0, 1));
        assert!(!uf.connected(1, 2));
        uf.union(1, 2);
        assert!(uf.connected(0, 3));
        assert!(!uf.connected(0, 4));
    }

    #[test]
    fn terminals_are_distinct_sets() {
        let mut uf = UnionFind::new(4);
        let l = uf.terminal(UnionFind::LEFT);
        let r = uf.terminal(UnionFind::RIGHT);
        assert!(!uf.connected(l, r));
        uf.union(l, 0);
        uf.union(r, 0);
        assert!(uf.connected(l, r));
    }

    #[test]
    fn reset_restores_singletons() {
        let mut uf = UnionFind::new(5);
        uf.union(0, 4);
        uf.reset();
        assert!(!uf.connected(0, 4));
        assert_eq!(uf.find(3), 3);
    }
}
