/// Disjoint sets over `0..n` that also track the members of every set.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    members: Vec<Vec<usize>>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
            members: (0..n).map(|i| vec![i]).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut node: usize) -> usize {
        let mut root = node;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[node] != node {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    pub(crate) fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub(crate) fn members(&mut self, node: usize) -> &[usize] {
        let root = self.find(node);
        &self.members[root]
    }

    /// Merges the sets of `a` and `b`. Returns the members that changed
    /// sides, i.e. the former members of whichever set lost its root, or
    /// `None` when both were already together.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> Option<(usize, Vec<usize>, Vec<usize>)> {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return None;
        }
        if self.rank[ra] < self.rank[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        if self.rank[ra] == self.rank[rb] {
            self.rank[ra] = self.rank[ra].saturating_add(1);
        }
        let moved = std::mem::take(&mut self.members[rb]);
        let stayed = self.members[ra].clone();
        self.members[ra].extend_from_slice(&moved);
        Some((ra, stayed, moved))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn members_follow_unions() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1).is_some());
        assert!(uf.union(1, 0).is_none());
        uf.union(3, 4);
        uf.union(4, 0);
        let mut m = uf.members(1).to_vec();
        m.sort_unstable();
        assert_eq!(m, vec![0, 1, 3, 4]);
        assert!(uf.same(0, 3));
        assert!(!uf.same(2, 3));
    }
}
