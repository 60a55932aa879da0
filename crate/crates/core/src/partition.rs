//! Node-to-community assignment with incrementally maintained community
//! statistics.
//!
//! For every community `S` the partition tracks its member list, the number
//! of edges with both ends in `S` (`l_S`) and the degree sum `K_S`. All
//! mutations update these in `O(d_u)` per moved node.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

pub type CommunityId = usize;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Community {
    members: Vec<NodeId>,
    internal_edges: usize,
    degree_sum: usize,
}

/// A possibly partial partition of a graph's nodes.
///
/// Community ids are stable slots; a slot whose community became empty stays
/// allocated (size 0) until [`Partition::compacted`] is called.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<Option<CommunityId>>,
    slot: Vec<usize>,
    communities: Vec<Community>,
}

impl Partition {
    /// Every node unassigned, no communities.
    pub fn unassigned(n: usize) -> Self {
        Partition {
            assignment: vec![None; n],
            slot: vec![0; n],
            communities: Vec::new(),
        }
    }

    /// One community per node, community id equal to node id.
    pub fn singletons(g: &Graph) -> Self {
        let mut p = Self::unassigned(g.node_count());
        for u in g.nodes() {
            let c = p.new_community();
            p.assign(g, u, c).expect("fresh node");
        }
        p
    }

    /// Builds a partition from explicit member lists. Community `i` gets id `i`.
    /// Nodes not listed stay unassigned.
    pub fn from_groups(g: &Graph, groups: &[Vec<NodeId>]) -> Result<Self> {
        let mut p = Self::unassigned(g.node_count());
        for group in groups {
            let c = p.new_community();
            for &u in group {
                if u >= g.node_count() {
                    return Err(Error::NodeOutOfRange(u));
                }
                if p.assignment[u].is_some() {
                    return Err(Error::DuplicateNode(g.original_id(u)));
                }
                p.assign(g, u, c)?;
            }
        }
        Ok(p)
    }

    /// Builds a partition from a per-node label vector; label values become
    /// community ids.
    pub fn from_labels(g: &Graph, labels: &[Option<CommunityId>]) -> Result<Self> {
        if labels.len() != g.node_count() {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} nodes",
                labels.len(),
                g.node_count()
            )));
        }
        let mut p = Self::unassigned(g.node_count());
        let slots = labels.iter().flatten().max().map_or(0, |&c| c + 1);
        p.communities.resize_with(slots, Community::default);
        for (u, label) in labels.iter().enumerate() {
            if let Some(c) = *label {
                p.assign(g, u, c)?;
            }
        }
        Ok(p)
    }

    /// Allocates an empty community and returns its id.
    pub fn new_community(&mut self) -> CommunityId {
        self.communities.push(Community::default());
        self.communities.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    #[inline]
    pub fn community_of(&self, u: NodeId) -> Option<CommunityId> {
        self.assignment[u]
    }

    pub fn assignment(&self) -> &[Option<CommunityId>] {
        &self.assignment
    }

    /// Number of allocated slots, including empty ones.
    pub fn slot_count(&self) -> usize {
        self.communities.len()
    }

    pub fn contains_community(&self, c: CommunityId) -> bool {
        c < self.communities.len()
    }

    fn community(&self, c: CommunityId) -> Result<&Community> {
        self.communities.get(c).ok_or(Error::UnknownCommunity(c))
    }

    pub fn size(&self, c: CommunityId) -> usize {
        self.communities[c].members.len()
    }

    /// `l_S`: edges with both endpoints in `c`.
    pub fn internal_edges(&self, c: CommunityId) -> usize {
        self.communities[c].internal_edges
    }

    /// `K_S`: sum of member degrees.
    pub fn degree_sum(&self, c: CommunityId) -> usize {
        self.communities[c].degree_sum
    }

    /// Members in no particular order.
    pub fn members(&self, c: CommunityId) -> &[NodeId] {
        &self.communities[c].members
    }

    /// Ids of non-empty communities, ascending.
    pub fn community_ids(&self) -> impl Iterator<Item = CommunityId> + '_ {
        (0..self.communities.len()).filter(move |&c| !self.communities[c].members.is_empty())
    }

    pub fn community_count(&self) -> usize {
        self.community_ids().count()
    }

    pub fn assigned_count(&self) -> usize {
        self.assignment.iter().filter(|a| a.is_some()).count()
    }

    pub fn is_fully_assigned(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    pub fn unassigned_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.assignment.len()).filter(move |&u| self.assignment[u].is_none())
    }

    /// Number of neighbors of `u` inside community `c` (never counts `u`).
    pub fn links_to(&self, g: &Graph, u: NodeId, c: CommunityId) -> usize {
        g.neighbors(u)
            .iter()
            .filter(|&&v| self.assignment[v] == Some(c))
            .count()
    }

    /// Internal degree of an assigned node: `|N(u) ∩ community(u)|`.
    pub fn internal_degree(&self, g: &Graph, u: NodeId) -> Result<usize> {
        let c = self.assignment[u].ok_or(Error::Unassigned(u))?;
        Ok(self.links_to(g, u, c))
    }

    /// Adds an unassigned node to community `c`.
    pub fn assign(&mut self, g: &Graph, u: NodeId, c: CommunityId) -> Result<()> {
        if u >= self.assignment.len() {
            return Err(Error::NodeOutOfRange(u));
        }
        self.community(c)?;
        if let Some(current) = self.assignment[u] {
            return Err(Error::AlreadyMember {
                node: u,
                community: current,
            });
        }
        let links = self.links_to(g, u, c);
        let com = &mut self.communities[c];
        com.internal_edges += links;
        com.degree_sum += g.degree(u);
        self.slot[u] = com.members.len();
        com.members.push(u);
        self.assignment[u] = Some(c);
        Ok(())
    }

    /// Removes `u` from its community and returns that community's id.
    pub fn unassign(&mut self, g: &Graph, u: NodeId) -> Result<CommunityId> {
        let c = self.assignment[u].ok_or(Error::Unassigned(u))?;
        let links = self.links_to(g, u, c);
        let com = &mut self.communities[c];
        com.internal_edges -= links;
        com.degree_sum -= g.degree(u);
        let pos = self.slot[u];
        com.members.swap_remove(pos);
        if let Some(&moved) = com.members.get(pos) {
            self.slot[moved] = pos;
        }
        self.assignment[u] = None;
        Ok(c)
    }

    /// Moves an assigned node into community `c`.
    pub fn move_node(&mut self, g: &Graph, u: NodeId, c: CommunityId) -> Result<()> {
        self.community(c)?;
        if self.assignment[u] == Some(c) {
            return Err(Error::AlreadyMember {
                node: u,
                community: c,
            });
        }
        self.unassign(g, u)?;
        self.assign(g, u, c)
    }

    /// Moves every member of `absorbed` into `kept`, leaving `absorbed` empty.
    pub fn merge(&mut self, g: &Graph, kept: CommunityId, absorbed: CommunityId) -> Result<()> {
        if kept == absorbed {
            return Err(Error::SelfMerge(kept));
        }
        self.community(kept)?;
        self.community(absorbed)?;
        let moving = std::mem::take(&mut self.communities[absorbed].members);
        let cross: usize = moving.iter().map(|&u| self.links_to(g, u, kept)).sum();
        let old = std::mem::take(&mut self.communities[absorbed]);
        let target = &mut self.communities[kept];
        target.internal_edges += old.internal_edges + cross;
        target.degree_sum += old.degree_sum;
        for u in moving {
            self.slot[u] = target.members.len();
            target.members.push(u);
            self.assignment[u] = Some(kept);
        }
        Ok(())
    }

    /// Non-empty communities as sorted member lists, ordered by smallest member.
    pub fn groups(&self) -> Vec<Vec<NodeId>> {
        let mut groups: Vec<Vec<NodeId>> = self
            .community_ids()
            .map(|c| {
                let mut m = self.communities[c].members.clone();
                m.sort_unstable();
                m
            })
            .collect();
        groups.sort_unstable_by_key(|m| m[0]);
        groups
    }

    /// Same grouping with community ids renumbered `0..k` by smallest member.
    pub fn compacted(&self, g: &Graph) -> Partition {
        Partition::from_groups(g, &self.groups()).expect("groups are disjoint")
    }

    /// Per-node community label, `None` for unassigned nodes.
    pub fn labels(&self) -> Vec<Option<CommunityId>> {
        self.assignment.clone()
    }

    /// Recomputes `(l_S, K_S, size)` for `c` directly from the graph.
    pub fn recount(&self, g: &Graph, c: CommunityId) -> (usize, usize, usize) {
        let members = &self.communities[c].members;
        let mut internal = 0;
        let mut degree_sum = 0;
        for &u in members {
            degree_sum += g.degree(u);
            internal += self.links_to(g, u, c);
        }
        (internal / 2, degree_sum, members.len())
    }

    /// True when every community's incremental statistics match a recount and
    /// member lists agree with the assignment vector.
    pub fn is_consistent(&self, g: &Graph) -> bool {
        for c in 0..self.communities.len() {
            let com = &self.communities[c];
            if self.recount(g, c) != (com.internal_edges, com.degree_sum, com.members.len()) {
                return false;
            }
            for (pos, &u) in com.members.iter().enumerate() {
                if self.assignment[u] != Some(c) || self.slot[u] != pos {
                    return false;
                }
            }
        }
        let listed: usize = self.communities.iter().map(|c| c.members.len()).sum();
        listed == self.assigned_count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).0
    }

    #[test]
    fn internal_degree_in_triangle() {
        let (g, _) = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let p = Partition::from_groups(&g, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(p.internal_degree(&g, 0).unwrap(), 2);
        assert_eq!(p.internal_edges(0), 3);
        assert_eq!(p.degree_sum(0), 6);
    }

    #[test]
    fn internal_degree_on_path() {
        let g = path3();
        let p = Partition::from_groups(&g, &[vec![0, 1]]).unwrap();
        assert_eq!(p.internal_degree(&g, 0).unwrap(), 1);
        assert!(matches!(
            p.internal_degree(&g, 2),
            Err(Error::Unassigned(2))
        ));
    }

    #[test]
    fn assign_twice_is_rejected() {
        let g = path3();
        let mut p = Partition::unassigned(3);
        let c = p.new_community();
        p.assign(&g, 0, c).unwrap();
        assert!(p.assign(&g, 0, c).is_err());
        assert!(p.assign(&g, 1, 7).is_err());
    }

    #[test]
    fn move_and_merge_keep_statistics() {
        let (g, _) = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]);
        let mut p = Partition::from_groups(&g, &[vec![0, 1], vec![2, 3], vec![4]]).unwrap();
        assert!(p.is_consistent(&g));
        p.move_node(&g, 3, 2).unwrap();
        assert!(p.is_consistent(&g));
        assert_eq!(p.internal_edges(2), 1);
        p.merge(&g, 0, 1).unwrap();
        assert!(p.is_consistent(&g));
        assert_eq!(p.internal_edges(0), 3);
        assert_eq!(p.size(1), 0);
        assert_eq!(p.community_count(), 2);
        assert_eq!(p.groups(), vec![vec![0, 1, 2], vec![3, 4]]);
        assert!(p.merge(&g, 0, 0).is_err());
    }

    #[test]
    fn duplicate_membership_is_rejected() {
        let g = path3();
        assert!(Partition::from_groups(&g, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn compacted_renumbers_by_first_member() {
        let g = path3();
        let p = Partition::from_labels(&g, &[Some(5), Some(2), Some(5)]).unwrap();
        let q = p.compacted(&g);
        assert_eq!(q.labels(), vec![Some(0), Some(1), Some(0)]);
        assert_eq!(q.slot_count(), 2);
    }
}
