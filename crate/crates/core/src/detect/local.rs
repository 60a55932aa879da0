//! Local search on Γ starting from seed communities.
//!
//! Each iteration makes two passes over the nodes in ascending id order:
//!
//! 1. every unassigned node with at least one assigned neighbor joins the
//!    neighboring community with the highest PS (ties to the lowest id);
//! 2. every assigned node moves to the neighboring community with the largest
//!    strictly positive gain over staying, if any (see [`MoveRule`]).
//!
//! The partition is updated right after each node's decision. Scores are
//! compared as exact integers scaled by `N²`, so ties and zero gains are
//! detected without rounding noise.

use crate::graph::{Graph, NodeId};
use crate::metrics::{add_gain_scaled, partition_gamma, ps_scaled};
use crate::partition::{CommunityId, Partition};

use super::{DetectConfig, MoveRule, SeedSet};

/// Outcome of one local-search iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationStats {
    /// Nodes that joined a community in the assignment pass.
    pub assigned: usize,
    /// Nodes that changed community in the refinement pass.
    pub moved: usize,
    /// Assigned nodes after the iteration.
    pub covered: usize,
    /// Γ after the iteration.
    pub gamma: f64,
}

#[derive(Debug, Clone)]
pub struct LocalSearch {
    pub partition: Partition,
    pub iterations: Vec<IterationStats>,
}

/// Scratch space collecting `(community, links)` pairs around one node.
struct NeighborCommunities {
    links: Vec<usize>,
    touched: Vec<CommunityId>,
}

impl NeighborCommunities {
    fn new(slots: usize) -> Self {
        NeighborCommunities {
            links: vec![0; slots],
            touched: Vec::new(),
        }
    }

    /// Fills with the communities adjacent to `u`, ascending by id.
    fn collect(&mut self, g: &Graph, p: &Partition, u: NodeId) {
        for &c in &self.touched {
            self.links[c] = 0;
        }
        self.touched.clear();
        for &v in g.neighbors(u) {
            if let Some(c) = p.community_of(v) {
                if self.links[c] == 0 {
                    self.touched.push(c);
                }
                self.links[c] += 1;
            }
        }
        self.touched.sort_unstable();
    }

    fn iter(&self) -> impl Iterator<Item = (CommunityId, usize)> + '_ {
        self.touched.iter().map(|&c| (c, self.links[c]))
    }
}

/// Runs local search from one singleton community per seed.
pub fn local_optimize(g: &Graph, seeds: &SeedSet, cfg: &DetectConfig) -> LocalSearch {
    let mut p = Partition::unassigned(g.node_count());
    for &s in &seeds.seeds {
        let c = p.new_community();
        p.assign(g, s, c).expect("seeds are distinct");
    }
    optimize_from(g, p, cfg.max_it, cfg.move_rule)
}

/// Runs local search from an arbitrary starting partition. No new
/// communities are created.
pub fn optimize_from(g: &Graph, mut p: Partition, max_it: usize, rule: MoveRule) -> LocalSearch {
    let mut iterations = Vec::new();
    if g.node_count() < 2 {
        return LocalSearch {
            partition: p,
            iterations,
        };
    }
    let big_n = g.node_count() - 1;
    let mut scratch = NeighborCommunities::new(p.slot_count());

    for _ in 0..max_it {
        let mut assigned = 0;
        for u in g.nodes() {
            if p.community_of(u).is_some() {
                continue;
            }
            scratch.collect(g, &p, u);
            let d = g.degree(u);
            let mut best: Option<(CommunityId, i128)> = None;
            for (c, links) in scratch.iter() {
                let score = ps_scaled(links, p.size(c), d, big_n);
                if best.is_none_or(|(_, s)| score > s) {
                    best = Some((c, score));
                }
            }
            if let Some((c, _)) = best {
                p.assign(g, u, c).expect("u is unassigned");
                assigned += 1;
            }
        }

        let mut moved = 0;
        for u in g.nodes() {
            let Some(own) = p.community_of(u) else {
                continue;
            };
            scratch.collect(g, &p, u);
            let d = g.degree(u);
            let own_links = scratch.links[own];
            let rest = p.size(own) - 1;
            let priced = match rule {
                MoveRule::Conservative => rest.saturating_sub(1),
                MoveRule::Exact => rest,
            };
            let stay = add_gain_scaled(own_links, priced, p.degree_sum(own) - d, d, big_n);
            let mut best: Option<(CommunityId, i128)> = None;
            for (c, links) in scratch.iter() {
                if c == own {
                    continue;
                }
                let gain = add_gain_scaled(links, p.size(c), p.degree_sum(c), d, big_n) - stay;
                if gain > best.map_or(0, |(_, t)| t) {
                    best = Some((c, gain));
                }
            }
            if let Some((c, _)) = best {
                p.move_node(g, u, c)
                    .expect("target differs from own community");
                moved += 1;
            }
        }

        iterations.push(IterationStats {
            assigned,
            moved,
            covered: p.assigned_count(),
            gamma: partition_gamma(g, &p).expect("n >= 2"),
        });
        if assigned == 0 && moved == 0 {
            break;
        }
    }
    LocalSearch {
        partition: p,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::select_seeds;
    use crate::metrics::{community_f, delta_add, delta_remove};
    use crate::triangles::count_triangles;

    fn run(g: &Graph) -> LocalSearch {
        run_with(g, MoveRule::Conservative)
    }

    fn run_with(g: &Graph, move_rule: MoveRule) -> LocalSearch {
        let seeds = select_seeds(g, &count_triangles(g, None));
        let cfg = DetectConfig {
            move_rule,
            ..DetectConfig::for_graph(g)
        };
        local_optimize(g, &seeds, &cfg)
    }

    fn sample_graph() -> Graph {
        let edges = [
            (0, 1),
            (0, 2),
            (1, 2),
            (2, 3),
            (3, 4),
            (3, 5),
            (4, 5),
            (5, 6),
            (6, 7),
            (4, 7),
            (1, 7),
        ];
        Graph::from_edges(8, &edges).0
    }

    /// Largest Γ gain of a single move into a neighboring community, with the
    /// mover's degree.
    fn best_neighbor_move(g: &Graph, p: &Partition) -> Option<(f64, usize)> {
        let mut best: Option<(f64, usize)> = None;
        for u in g.nodes() {
            let own = p.community_of(u).unwrap();
            let stay = delta_remove(g, p, u).unwrap();
            for &v in g.neighbors(u) {
                let c = p.community_of(v).unwrap();
                if c != own {
                    let gain = delta_add(g, p, u, c).unwrap() - stay;
                    if best.is_none_or(|(b, _)| gain > b) {
                        best = Some((gain, g.degree(u)));
                    }
                }
            }
        }
        best
    }

    fn two_k4() -> Graph {
        let mut edges = vec![];
        for base in [0, 4] {
            for u in 0..4 {
                for v in u + 1..4 {
                    edges.push((base + u, base + v));
                }
            }
        }
        Graph::from_edges(8, &edges).0
    }

    #[test]
    fn two_disjoint_cliques_are_recovered() {
        let g = two_k4();
        let out = run(&g);
        assert_eq!(
            out.partition.groups(),
            vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]]
        );
        // F(K4) with N = 7: 2·6/7 − 3·12/49
        let f = 12.0 / 7.0 - 36.0 / 49.0;
        let gamma = out.iterations.last().unwrap().gamma;
        assert!((gamma - 2.0 * f).abs() < 1e-12);
        assert!((community_f(&g, &out.partition, 0).unwrap() - f).abs() < 1e-12);
    }

    #[test]
    fn triangle_becomes_one_community() {
        let (g, _) = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(run(&g).partition.groups(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn stops_when_nothing_changes() {
        let g = two_k4();
        let out = run(&g);
        let last = out.iterations.last().unwrap();
        assert_eq!((last.assigned, last.moved), (0, 0));
        assert!(out.iterations.len() <= 20);
    }

    #[test]
    fn exact_rule_leaves_no_improving_neighbor_move() {
        let g = sample_graph();
        let out = run_with(&g, MoveRule::Exact);
        if let Some((gain, _)) = best_neighbor_move(&g, &out.partition) {
            assert!(gain <= 1e-12);
        }
    }

    #[test]
    fn conservative_rule_leaves_only_small_moves() {
        let mut rng_edges = vec![];
        // a few fixed irregular graphs
        for shift in 0..6usize {
            let n = 7 + shift % 3;
            let mut edges = vec![];
            for u in 0..n {
                for v in u + 1..n {
                    if (u * 7 + v * 3 + shift) % 5 < 2 {
                        edges.push((u, v));
                    }
                }
            }
            rng_edges.push((n, edges));
        }
        for (n, edges) in rng_edges {
            let (g, _) = Graph::from_edges(n, &edges);
            if g.edge_count() == 0 {
                continue;
            }
            let out = run(&g);
            let mut p = out.partition.clone();
            for u in g.nodes() {
                if p.community_of(u).is_none() {
                    let c = p.new_community();
                    p.assign(&g, u, c).unwrap();
                }
            }
            let big_n = (n - 1) as f64;
            if let Some((gain, d)) = best_neighbor_move(&g, &p) {
                assert!(gain <= d as f64 / (big_n * big_n) + 1e-12, "gain {gain}");
            }
        }
    }

    #[test]
    fn gamma_never_decreases_once_covered() {
        for rule in [MoveRule::Conservative, MoveRule::Exact] {
            let out = run_with(&sample_graph(), rule);
            for w in out.iterations.windows(2) {
                if w[0].covered == w[1].covered {
                    assert!(w[1].gamma >= w[0].gamma - 1e-12);
                }
            }
        }
    }

    #[test]
    fn max_it_bounds_iterations() {
        // long path: one layer of nodes is reached per pass at most
        let edges: Vec<_> = (0..40).map(|u| (u, u + 1)).collect();
        let (g, _) = Graph::from_edges(41, &edges);
        let seeds = select_seeds(&g, &count_triangles(&g, None));
        let cfg = DetectConfig {
            max_it: 1,
            ..DetectConfig::for_graph(&g)
        };
        let out = local_optimize(&g, &seeds, &cfg);
        assert_eq!(out.iterations.len(), 1);
    }
}
