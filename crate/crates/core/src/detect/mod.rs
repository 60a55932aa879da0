//! The detection pipeline: seed selection, local search on Γ, then greedy
//! merging on Φ.

mod local;
mod merge;
mod seeds;
mod union_find;

pub use local::{local_optimize, optimize_from, IterationStats, LocalSearch};
pub use merge::{merge_communities, MergeCandidate, MergeOutcome, MergeRecord};
pub use seeds::{select_seeds, SeedSet};
pub use union_find::UnionFind;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::MergeMetric;
use crate::partition::Partition;
use crate::triangles::{count_triangles, TriangleCounts};

/// Graphs with fewer nodes use [`SMALL_GRAPH_TH`], larger ones [`LARGE_GRAPH_TH`].
pub const LARGE_GRAPH_NODES: usize = 4000;
pub const SMALL_GRAPH_TH: f64 = -2.8;
pub const LARGE_GRAPH_TH: f64 = -0.43;
pub const DEFAULT_MAX_IT: usize = 20;

/// Recommended open interval for the merge threshold.
pub const TH_RANGE: (f64, f64) = (-2.9, 0.0);

/// How the refinement pass prices keeping a node where it is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MoveRule {
    /// The node's removal gain is evaluated as if its community had one
    /// member fewer, so a move is taken only when it raises Γ by more than
    /// `d_u/N²`. This gives the two-faction split of the karate club graph.
    #[default]
    Conservative,
    /// Any move with a strictly positive Γ gain is taken; the result is a
    /// local optimum for moves into neighboring communities.
    Exact,
}

/// Detection parameters. Ties are always broken toward the lowest node or
/// community id.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectConfig {
    /// Merge threshold: a pair is merged only if its Φ gain exceeds this.
    pub th: f64,
    /// Cap on local-search iterations.
    pub max_it: usize,
    pub merge_metric: MergeMetric,
    /// Triangle-counting degree threshold; `None` means `⌈√(2m)⌉`.
    pub beta: Option<usize>,
    pub move_rule: MoveRule,
}

impl DetectConfig {
    /// Defaults sized for `g`.
    pub fn for_graph(g: &Graph) -> Self {
        DetectConfig {
            th: default_th(g.node_count()),
            max_it: DEFAULT_MAX_IT,
            merge_metric: MergeMetric::Phi,
            beta: None,
            move_rule: MoveRule::default(),
        }
    }

    /// Rejects `max_it = 0` or a non-finite threshold; warns when the
    /// threshold is outside the recommended range.
    pub fn validate(&self) -> Result<()> {
        if self.max_it == 0 {
            return Err(Error::InvalidParameter("max_it must be at least 1".into()));
        }
        if !self.th.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "threshold {} is not finite",
                self.th
            )));
        }
        if !(self.th > TH_RANGE.0 && self.th < TH_RANGE.1) {
            log::warn!(
                "merge threshold {} is outside the recommended range ({}, {})",
                self.th,
                TH_RANGE.0,
                TH_RANGE.1
            );
        }
        Ok(())
    }
}

pub fn default_th(node_count: usize) -> f64 {
    if node_count < LARGE_GRAPH_NODES {
        SMALL_GRAPH_TH
    } else {
        LARGE_GRAPH_TH
    }
}

/// Everything the pipeline produced along the way.
#[derive(Debug, Clone)]
pub struct Detection {
    pub triangles: TriangleCounts,
    pub seeds: SeedSet,
    pub local: LocalSearch,
    /// Local-search result with leftover nodes as singletons.
    pub pre_merge: Partition,
    pub merges: Vec<MergeRecord>,
    /// Final partition, communities renumbered by smallest member.
    pub partition: Partition,
}

/// Runs all three phases and keeps intermediate results.
pub fn run(g: &Graph, cfg: &DetectConfig) -> Result<Detection> {
    cfg.validate()?;
    let triangles = count_triangles(g, cfg.beta);
    let seeds = select_seeds(g, &triangles);
    let local = local_optimize(g, &seeds, cfg);
    let mut pre_merge = local.partition.clone();
    let leftovers: Vec<_> = pre_merge.unassigned_nodes().collect();
    if !leftovers.is_empty() {
        log::debug!(
            "{} node(s) left unassigned by local search",
            leftovers.len()
        );
    }
    for u in leftovers {
        let c = pre_merge.new_community();
        pre_merge.assign(g, u, c)?;
    }
    let merged = merge_communities(g, &pre_merge, cfg);
    let partition = merged.partition.compacted(g);
    Ok(Detection {
        triangles,
        seeds,
        local,
        pre_merge,
        merges: merged.merges,
        partition,
    })
}

/// Detects communities; the result is fully assigned.
pub fn detect(g: &Graph, cfg: &DetectConfig) -> Result<Partition> {
    Ok(run(g, cfg)?.partition)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_threshold_depends_on_size() {
        assert_eq!(default_th(34), -2.8);
        assert_eq!(default_th(3999), -2.8);
        assert_eq!(default_th(4000), -0.43);
    }

    #[test]
    fn zero_iterations_rejected() {
        let (g, _) = Graph::from_edges(2, &[(0, 1)]);
        let cfg = DetectConfig {
            max_it: 0,
            ..DetectConfig::for_graph(&g)
        };
        assert!(detect(&g, &cfg).is_err());
    }

    #[test]
    fn two_disjoint_k4_end_to_end() {
        let mut edges = vec![];
        for base in [0, 4] {
            for u in 0..4 {
                for v in u + 1..4 {
                    edges.push((base + u, base + v));
                }
            }
        }
        let (g, _) = Graph::from_edges(8, &edges);
        let p = detect(&g, &DetectConfig::for_graph(&g)).unwrap();
        assert_eq!(p.groups(), vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]]);
    }

    #[test]
    fn isolated_nodes_end_up_assigned() {
        let (g, _) = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2)]);
        let out = run(&g, &DetectConfig::for_graph(&g)).unwrap();
        assert!(out.partition.is_fully_assigned());
        assert!(out.partition.is_consistent(&g));
        assert_eq!(out.partition.groups()[0], vec![0, 1, 2]);
    }
}
