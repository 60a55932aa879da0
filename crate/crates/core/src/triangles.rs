//! Per-node triangle counts with a low/high degree split.
//!
//! Nodes with degree `<= β` are "low". Every triangle with at least one low
//! corner is found by enumerating neighbor pairs of low nodes and credited
//! only from its smallest-id low corner. Triangles whose three corners are all
//! high are found by pair enumeration inside the subgraph induced by the high
//! nodes, credited from the smallest corner. With `β = ⌈√(2m)⌉` the total work
//! is `O(m√m)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Largest graph the brute-force counter accepts.
pub const NAIVE_MAX_NODES: usize = 5000;

const PARALLEL_MIN_EDGES: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleCounts {
    pub counts: Vec<u64>,
    /// Degree threshold used; 0 for the brute-force counter.
    pub beta: usize,
}

impl TriangleCounts {
    pub fn get(&self, u: NodeId) -> u64 {
        self.counts[u]
    }

    /// Number of distinct triangles in the graph.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() / 3
    }
}

/// `⌈√(2m)⌉`.
pub fn default_beta(g: &Graph) -> usize {
    let target = 2 * g.edge_count();
    let mut b = (target as f64).sqrt() as usize;
    while b * b < target {
        b += 1;
    }
    while b > 0 && (b - 1) * (b - 1) >= target {
        b -= 1;
    }
    b
}

/// Exact per-node triangle counts. `beta = None` uses [`default_beta`].
/// The result does not depend on `beta`.
pub fn count_triangles(g: &Graph, beta: Option<usize>) -> TriangleCounts {
    let beta = beta.unwrap_or_else(|| default_beta(g));
    let n = g.node_count();
    let low: Vec<bool> = g.nodes().map(|u| g.degree(u) <= beta).collect();

    let credit_low = |counts: &mut Vec<u64>, u: NodeId| {
        let nbrs = g.neighbors(u);
        for (i, &v) in nbrs.iter().enumerate() {
            if low[v] && v < u {
                continue;
            }
            for &w in &nbrs[i + 1..] {
                if low[w] && w < u {
                    continue;
                }
                if g.has_edge(v, w) {
                    counts[u] += 1;
                    counts[v] += 1;
                    counts[w] += 1;
                }
            }
        }
    };

    let low_nodes: Vec<NodeId> = g.nodes().filter(|&u| low[u]).collect();
    let mut counts = if g.edge_count() >= PARALLEL_MIN_EDGES {
        low_nodes
            .par_iter()
            .fold(
                || vec![0u64; n],
                |mut acc, &u| {
                    credit_low(&mut acc, u);
                    acc
                },
            )
            .reduce(
                || vec![0u64; n],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    } else {
        let mut acc = vec![0u64; n];
        for &u in &low_nodes {
            credit_low(&mut acc, u);
        }
        acc
    };

    // induced subgraph on high-degree nodes
    let high_adj: Vec<Vec<NodeId>> = g
        .nodes()
        .map(|u| {
            if low[u] {
                Vec::new()
            } else {
                g.neighbors(u)
                    .iter()
                    .copied()
                    .filter(|&v| !low[v])
                    .collect()
            }
        })
        .collect();
    for u in g.nodes().filter(|&u| !low[u]) {
        let nbrs = &high_adj[u];
        let start = nbrs.partition_point(|&v| v <= u);
        for (i, &v) in nbrs.iter().enumerate().skip(start) {
            for &w in &nbrs[i + 1..] {
                if high_adj[v].binary_search(&w).is_ok() {
                    counts[u] += 1;
                    counts[v] += 1;
                    counts[w] += 1;
                }
            }
        }
    }

    TriangleCounts { counts, beta }
}

/// Brute-force counter over all node triples using a dense adjacency matrix.
pub fn count_triangles_naive(g: &Graph) -> Result<TriangleCounts> {
    let n = g.node_count();
    if n > NAIVE_MAX_NODES {
        return Err(Error::InvalidParameter(format!(
            "naive triangle counting is limited to {NAIVE_MAX_NODES} nodes, got {n}"
        )));
    }
    let mut adj = vec![false; n * n];
    for (u, v) in g.edges() {
        adj[u * n + v] = true;
        adj[v * n + u] = true;
    }
    let mut counts = vec![0u64; n];
    for u in 0..n {
        for v in u + 1..n {
            if !adj[u * n + v] {
                continue;
            }
            for w in v + 1..n {
                if adj[u * n + w] && adj[v * n + w] {
                    counts[u] += 1;
                    counts[v] += 1;
                    counts[w] += 1;
                }
            }
        }
    }
    Ok(TriangleCounts { counts, beta: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(k: usize) -> Graph {
        let mut edges = vec![];
        for u in 0..k {
            for v in u + 1..k {
                edges.push((u, v));
            }
        }
        Graph::from_edges(k, &edges).0
    }

    #[test]
    fn small_complete_graphs() {
        assert_eq!(count_triangles(&complete(3), None).counts, vec![1, 1, 1]);
        assert_eq!(count_triangles(&complete(4), None).counts, vec![3; 4]);
        assert_eq!(
            count_triangles_naive(&complete(5)).unwrap().counts,
            vec![6; 5]
        );
        assert_eq!(count_triangles(&complete(5), None).total(), 10);
    }

    #[test]
    fn empty_graph_has_no_triangles() {
        let (g, _) = Graph::from_edges(4, &[]);
        assert_eq!(count_triangles_naive(&g).unwrap().counts, vec![0; 4]);
        assert_eq!(count_triangles(&g, None).counts, vec![0; 4]);
    }

    #[test]
    fn default_beta_is_ceiling_sqrt() {
        // m = 6 -> sqrt(12) = 3.46
        assert_eq!(default_beta(&complete(4)), 4);
        // m = 8 -> sqrt(16) = 4 exactly
        let (g, _) = Graph::from_edges(9, &(1..9).map(|v| (0, v)).collect::<Vec<_>>());
        assert_eq!(default_beta(&g), 4);
    }

    #[test]
    fn mixed_degree_triangles_counted_once() {
        // K5 hub clique with pendant triangles hanging off each clique node.
        let mut edges = vec![];
        for u in 0..5 {
            for v in u + 1..5 {
                edges.push((u, v));
            }
        }
        let mut next = 5;
        for u in 0..5 {
            edges.extend([(u, next), (u, next + 1), (next, next + 1)]);
            next += 2;
        }
        let (g, _) = Graph::from_edges(next, &edges);
        let oracle = count_triangles_naive(&g).unwrap();
        for beta in 0..=g.node_count() {
            assert_eq!(
                count_triangles(&g, Some(beta)).counts,
                oracle.counts,
                "beta={beta}"
            );
        }
    }

    #[test]
    fn naive_refuses_large_graphs() {
        let (g, _) = Graph::from_edges(NAIVE_MAX_NODES + 1, &[(0, 1)]);
        assert!(count_triangles_naive(&g).is_err());
    }
}
