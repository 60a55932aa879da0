//! Greedy agglomeration of communities by Φ gain.
//!
//! Communities form a weighted graph whose edge `(i, j)` exists when at least
//! one graph edge crosses them; its weight is
//! `ΔW_ij = Φ(S_i ∪ S_j) − Φ(S_i) − Φ(S_j)`. Pairs above the threshold sit in
//! a max-heap. Popping a pair whose communities are both still roots and whose
//! stored weight is still current merges them; the merged community's weights
//! to all its neighbors are then recomputed and re-pushed. Outdated heap
//! entries are skipped on pop.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use crate::graph::{Graph, NodeId};
use crate::metrics::{member_score, MergeMetric};
use crate::partition::{CommunityId, Partition};

use super::union_find::UnionFind;
use super::DetectConfig;

/// Heap entry `(i, j, ΔW)` with `i < j`.
#[derive(Debug, Clone, Copy)]
pub struct MergeCandidate {
    pub i: CommunityId,
    pub j: CommunityId,
    pub w: f64,
}

impl PartialEq for MergeCandidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for MergeCandidate {}

impl PartialOrd for MergeCandidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MergeCandidate {
    /// Larger ΔW first, then lower `(i, j)`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.w
            .total_cmp(&other.w)
            .then_with(|| (other.i, other.j).cmp(&(self.i, self.j)))
    }
}

/// One executed union.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MergeRecord {
    pub kept: CommunityId,
    pub absorbed: CommunityId,
    pub delta_w: f64,
}

#[derive(Debug, Clone)]
pub struct MergeOutcome {
    /// Merged partition; community ids are those of the input partition.
    pub partition: Partition,
    pub merges: Vec<MergeRecord>,
}

struct CommunityGraph<'g> {
    g: &'g Graph,
    metric: MergeMetric,
    big_n: usize,
    p: Partition,
    /// Links of each node into its own community.
    omega: Vec<usize>,
    phi: Vec<f64>,
    weights: Vec<BTreeMap<CommunityId, f64>>,
}

impl<'g> CommunityGraph<'g> {
    fn new(g: &'g Graph, p: Partition, metric: MergeMetric) -> Self {
        let big_n = g.node_count() - 1;
        let omega: Vec<usize> = g
            .nodes()
            .map(|u| p.community_of(u).map_or(0, |c| p.links_to(g, u, c)))
            .collect();
        let mut cg = CommunityGraph {
            g,
            metric,
            big_n,
            weights: vec![BTreeMap::new(); p.slot_count()],
            phi: vec![0.0; p.slot_count()],
            p,
            omega,
        };
        for c in 0..cg.p.slot_count() {
            cg.phi[c] = cg.phi_of(c);
        }
        for c in 0..cg.p.slot_count() {
            for &u in cg.p.members(c) {
                for &v in g.neighbors(u) {
                    if let Some(d) = cg.p.community_of(v) {
                        if d > c && !cg.weights[c].contains_key(&d) {
                            let w = cg.delta_w(c, d);
                            cg.weights[c].insert(d, w);
                            cg.weights[d].insert(c, w);
                        }
                    }
                }
            }
        }
        cg
    }

    fn phi_of(&self, c: CommunityId) -> f64 {
        let size = self.p.size(c);
        if size == 0 {
            return 0.0;
        }
        self.p
            .members(c)
            .iter()
            .map(|&u| {
                member_score(
                    self.metric,
                    self.omega[u],
                    size - 1,
                    self.g.degree(u),
                    self.big_n,
                )
            })
            .sum()
    }

    fn links_between(&self, u: NodeId, c: CommunityId) -> usize {
        self.p.links_to(self.g, u, c)
    }

    fn delta_w(&self, a: CommunityId, b: CommunityId) -> f64 {
        let epsilon = self.p.size(a) + self.p.size(b) - 1;
        let mut union = 0.0;
        for (own, other) in [(a, b), (b, a)] {
            for &u in self.p.members(own) {
                let omega = self.omega[u] + self.links_between(u, other);
                union += member_score(self.metric, omega, epsilon, self.g.degree(u), self.big_n);
            }
        }
        union - self.phi[a] - self.phi[b]
    }

    /// Merges `absorbed` into `kept` and refreshes cached scores.
    fn merge(&mut self, kept: CommunityId, absorbed: CommunityId) {
        let mut updates: Vec<(NodeId, usize)> = Vec::new();
        for (own, other) in [(kept, absorbed), (absorbed, kept)] {
            for &u in self.p.members(own) {
                updates.push((u, self.links_between(u, other)));
            }
        }
        for (u, extra) in updates {
            self.omega[u] += extra;
        }
        self.p
            .merge(self.g, kept, absorbed)
            .expect("distinct live communities");
        self.phi[kept] = self.phi_of(kept);
        self.phi[absorbed] = 0.0;

        let absorbed_edges = std::mem::take(&mut self.weights[absorbed]);
        let mut neighbors: Vec<CommunityId> = self.weights[kept]
            .keys()
            .chain(absorbed_edges.keys())
            .copied()
            .filter(|&x| x != kept && x != absorbed)
            .collect();
        neighbors.sort_unstable();
        neighbors.dedup();
        for &x in absorbed_edges.keys() {
            self.weights[x].remove(&absorbed);
        }
        self.weights[kept].clear();
        for x in neighbors {
            let w = self.delta_w(kept, x);
            self.weights[kept].insert(x, w);
            self.weights[x].insert(kept, w);
        }
    }
}

/// Merges communities of a fully assigned partition while the best pair gain
/// exceeds `cfg.th`.
pub fn merge_communities(g: &Graph, p: &Partition, cfg: &DetectConfig) -> MergeOutcome {
    if g.node_count() < 2 {
        return MergeOutcome {
            partition: p.clone(),
            merges: Vec::new(),
        };
    }
    let mut cg = CommunityGraph::new(g, p.clone(), cfg.merge_metric);
    let sizes: Vec<usize> = (0..cg.p.slot_count()).map(|c| cg.p.size(c)).collect();
    let mut uf = UnionFind::with_sizes(sizes);
    let mut heap = BinaryHeap::new();
    for (i, edges) in cg.weights.iter().enumerate() {
        for (&j, &w) in edges.range(i + 1..) {
            if w > cfg.th {
                heap.push(MergeCandidate { i, j, w });
            }
        }
    }

    let mut merges = Vec::new();
    while let Some(MergeCandidate { i, j, w }) = heap.pop() {
        if !uf.is_root(i) || !uf.is_root(j) {
            continue;
        }
        match cg.weights[i].get(&j) {
            Some(&current) if current.to_bits() == w.to_bits() => {}
            _ => continue,
        }
        let (kept, absorbed) = uf.union(i, j).expect("distinct roots");
        cg.merge(kept, absorbed);
        merges.push(MergeRecord {
            kept,
            absorbed,
            delta_w: w,
        });
        for (&x, &wx) in &cg.weights[kept] {
            if wx > cfg.th {
                let (a, b) = (kept.min(x), kept.max(x));
                heap.push(MergeCandidate { i: a, j: b, w: wx });
            }
        }
    }
    MergeOutcome {
        partition: cg.p,
        merges,
    }
}
