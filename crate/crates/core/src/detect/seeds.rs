use crate::graph::{Graph, NodeId};
use crate::triangles::TriangleCounts;

/// Seed nodes in selection order. No two seeds are adjacent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSet {
    pub seeds: Vec<NodeId>,
}

impl SeedSet {
    pub fn len(&self) -> usize {
        self.seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seeds.is_empty()
    }
}

/// Visits nodes by (triangle count desc, degree desc, id asc); each node not
/// yet visited becomes a seed and marks itself and its neighbors visited.
pub fn select_seeds(g: &Graph, tc: &TriangleCounts) -> SeedSet {
    let mut order: Vec<NodeId> = g.nodes().collect();
    order.sort_by(|&a, &b| {
        tc.get(b)
            .cmp(&tc.get(a))
            .then(g.degree(b).cmp(&g.degree(a)))
            .then(a.cmp(&b))
    });
    let mut visited = vec![false; g.node_count()];
    let mut seeds = Vec::new();
    for u in order {
        if visited[u] {
            continue;
        }
        visited[u] = true;
        for &v in g.neighbors(u) {
            visited[v] = true;
        }
        seeds.push(u);
    }
    SeedSet { seeds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangles::count_triangles;

    fn seeds_of(n: usize, edges: &[(usize, usize)]) -> Vec<NodeId> {
        let (g, _) = Graph::from_edges(n, edges);
        select_seeds(&g, &count_triangles(&g, None)).seeds
    }

    #[test]
    fn two_disjoint_k4() {
        let mut edges = vec![];
        for base in [0, 4] {
            for u in 0..4 {
                for v in u + 1..4 {
                    edges.push((base + u, base + v));
                }
            }
        }
        // all nodes tie on (3 triangles, degree 3): ids 0 and 4 win
        assert_eq!(seeds_of(8, &edges), vec![0, 4]);
    }

    #[test]
    fn star_hub_is_sole_seed() {
        let edges: Vec<_> = (1..6).map(|v| (0, v)).collect();
        assert_eq!(seeds_of(6, &edges), vec![0]);
        // hub listed last still wins on degree
        let edges: Vec<_> = (0..5).map(|v| (v, 5)).collect();
        assert_eq!(seeds_of(6, &edges), vec![5]);
    }

    #[test]
    fn triangle_has_one_seed() {
        assert_eq!(seeds_of(3, &[(0, 1), (1, 2), (0, 2)]), vec![0]);
    }

    #[test]
    fn seeds_are_independent_and_dominating() {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 4), (6, 7)];
        let (g, _) = Graph::from_edges(9, &edges);
        let seeds = select_seeds(&g, &count_triangles(&g, None)).seeds;
        for (i, &a) in seeds.iter().enumerate() {
            for &b in &seeds[i + 1..] {
                assert!(!g.has_edge(a, b));
            }
        }
        for u in g.nodes() {
            assert!(seeds.contains(&u) || g.neighbors(u).iter().any(|v| seeds.contains(v)));
        }
        // isolated node 8 seeds itself
        assert!(seeds.contains(&8));
    }
}
