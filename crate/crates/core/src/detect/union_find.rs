/// Disjoint sets with path compression and union by size.
///
/// Set sizes start from caller-supplied weights so that the root of a union
/// is the set covering more graph nodes.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn with_sizes(sizes: Vec<usize>) -> Self {
        UnionFind {
            parent: (0..sizes.len()).collect(),
            size: sizes,
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn is_root(&self, x: usize) -> bool {
        self.parent[x] == x
    }

    pub fn size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }

    /// Joins the sets of `a` and `b`; returns `(root, absorbed_root)`, or
    /// `None` if they were already joined. The larger set keeps its root;
    /// on equal sizes the smaller id wins.
    pub fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (root, child) = match self.size[ra].cmp(&self.size[rb]) {
            std::cmp::Ordering::Greater => (ra, rb),
            std::cmp::Ordering::Less => (rb, ra),
            std::cmp::Ordering::Equal => (ra.min(rb), ra.max(rb)),
        };
        self.parent[child] = root;
        self.size[root] += self.size[child];
        Some((root, child))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn larger_set_keeps_root() {
        let mut uf = UnionFind::with_sizes(vec![1, 5, 2, 2]);
        assert_eq!(uf.union(0, 1), Some((1, 0)));
        assert_eq!(uf.union(2, 3), Some((2, 3)));
        assert_eq!(uf.union(3, 0), Some((1, 2)));
        assert_eq!(uf.union(0, 2), None);
        assert_eq!(uf.size(3), 10);
        for x in 0..4 {
            assert_eq!(uf.find(x), 1);
        }
        assert!(uf.is_root(1));
        assert!(!uf.is_root(2));
    }
}
