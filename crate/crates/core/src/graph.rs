//! Immutable undirected simple graph in compressed sparse row form.
//!
//! Nodes are densely indexed `0..n`. Each node keeps the identifier it had in
//! the input so partitions can be written back in the caller's numbering.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Dense node index.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    edge_count: usize,
    original_ids: Vec<u64>,
}

/// What was discarded while building a simple graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadWarnings {
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

impl LoadWarnings {
    pub fn total(&self) -> usize {
        self.duplicate_edges + self.self_loops
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexBase {
    Zero,
    One,
}

#[derive(Debug, Clone)]
pub struct EdgeListOptions {
    pub index_base: IndexBase,
    pub comment_prefix: String,
}

impl Default for EdgeListOptions {
    fn default() -> Self {
        Self {
            index_base: IndexBase::Zero,
            comment_prefix: "#".to_string(),
        }
    }
}

impl Graph {
    /// Builds a graph on nodes `0..n` with identity original ids.
    ///
    /// Self-loops and repeated edges (in either orientation) are dropped and
    /// counted. Panics if an endpoint is `>= n`.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> (Self, LoadWarnings) {
        Self::build(n, edges.iter().copied(), (0..n as u64).collect())
    }

    fn build(
        n: usize,
        edges: impl Iterator<Item = (NodeId, NodeId)>,
        original_ids: Vec<u64>,
    ) -> (Self, LoadWarnings) {
        let mut warnings = LoadWarnings::default();
        let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} nodes");
            if u == v {
                warnings.self_loops += 1;
                continue;
            }
            pairs.push((u.min(v), u.max(v)));
        }
        let raw = pairs.len();
        pairs.sort_unstable();
        pairs.dedup();
        warnings.duplicate_edges = raw - pairs.len();

        let mut degree = vec![0usize; n];
        for &(u, v) in &pairs {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0; 2 * pairs.len()];
        for &(u, v) in &pairs {
            targets[cursor[u]] = v;
            cursor[u] += 1;
            targets[cursor[v]] = u;
            cursor[v] += 1;
        }
        for u in 0..n {
            targets[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        let graph = Graph {
            offsets,
            targets,
            edge_count: pairs.len(),
            original_ids,
        };
        (graph, warnings)
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn degree(&self, u: NodeId) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Sorted neighbor list of `u`.
    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    /// Edge lookup by binary search on the shorter adjacency list.
    #[inline]
    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn original_id(&self, u: NodeId) -> u64 {
        self.original_ids[u]
    }

    pub fn original_ids(&self) -> &[u64] {
        &self.original_ids
    }

    /// Map from input identifier to dense index.
    pub fn index_map(&self) -> HashMap<u64, NodeId> {
        self.original_ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i))
            .collect()
    }

    /// Copy of the graph without the given nodes. Remaining nodes keep their
    /// original ids and relative order.
    pub fn without_nodes(&self, removed: &[NodeId]) -> Graph {
        let mut keep = vec![true; self.node_count()];
        for &u in removed {
            keep[u] = false;
        }
        let mut new_index = vec![usize::MAX; self.node_count()];
        let mut ids = Vec::new();
        for u in self.nodes().filter(|&u| keep[u]) {
            new_index[u] = ids.len();
            ids.push(self.original_ids[u]);
        }
        let edges: Vec<_> = self
            .edges()
            .filter(|&(u, v)| keep[u] && keep[v])
            .map(|(u, v)| (new_index[u], new_index[v]))
            .collect();
        Self::build(ids.len(), edges.into_iter(), ids).0
    }

    /// Writes `u v` lines using original ids.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{} {}", self.original_ids[u], self.original_ids[v])?;
        }
        Ok(())
    }
}

/// Parses a whitespace-separated edge list.
///
/// Identifiers are re-indexed densely in ascending order of their input value;
/// the input value is kept as the node's original id. Extra tokens after the
/// first two on a line are ignored (weights, timestamps).
pub fn load_edge_list<R: BufRead>(
    reader: R,
    options: &EdgeListOptions,
) -> Result<(Graph, LoadWarnings)> {
    let mut raw: Vec<(u64, u64)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty()
            || (!options.comment_prefix.is_empty() && trimmed.starts_with(&options.comment_prefix))
        {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut next = || -> Result<u64> {
            let tok = tokens.next().ok_or_else(|| Error::Parse {
                line: lineno,
                message: "expected two node ids".into(),
            })?;
            let id: u64 = tok.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("invalid node id {tok:?}"),
            })?;
            if options.index_base == IndexBase::One && id == 0 {
                return Err(Error::Parse {
                    line: lineno,
                    message: "node id 0 in a 1-indexed edge list".into(),
                });
            }
            Ok(id)
        };
        let u = next()?;
        let v = next()?;
        raw.push((u, v));
    }

    let mut ids: Vec<u64> = raw.iter().flat_map(|&(u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let index: HashMap<u64, NodeId> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let n = ids.len();
    let (graph, warnings) = Graph::build(n, raw.iter().map(|(u, v)| (index[u], index[v])), ids);
    if graph.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if warnings.total() > 0 {
        log::warn!(
            "dropped {} duplicate edge(s) and {} self-loop(s)",
            warnings.duplicate_edges,
            warnings.self_loops
        );
    }
    Ok((graph, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str, base: IndexBase) -> Result<(Graph, LoadWarnings)> {
        let opts = EdgeListOptions {
            index_base: base,
            ..Default::default()
        };
        load_edge_list(text.as_bytes(), &opts)
    }

    #[test]
    fn triangle_from_text() {
        let (g, w) = load("0 1\n1 2\n2 0", IndexBase::Zero).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (3, 3));
        assert_eq!(w.total(), 0);
        assert_eq!(g.neighbors(0), &[1, 2]);
    }

    #[test]
    fn duplicates_and_self_loops_are_dropped() {
        let (g, w) = load("1 2\n2 1\n1 1", IndexBase::One).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
        assert!(g.has_edge(0, 1));
        assert_eq!(w.duplicate_edges, 1);
        assert_eq!(w.self_loops, 1);
        assert_eq!(w.total(), 2);
        assert_eq!(g.original_ids(), &[1, 2]);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        match load("# header\n0 1\n1 x\n", IndexBase::Zero) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match load("0 1\n2\n", IndexBase::Zero) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_in_one_indexed_file_is_rejected() {
        assert!(matches!(
            load("0 1\n", IndexBase::One),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            load("# nothing\n\n", IndexBase::Zero),
            Err(Error::EmptyGraph)
        ));
        assert!(matches!(
            load("3 3\n", IndexBase::Zero),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn sparse_ids_are_reindexed() {
        let (g, _) = load("10 30\n30 20\n", IndexBase::Zero).unwrap();
        assert_eq!(g.original_ids(), &[10, 20, 30]);
        assert!(g.has_edge(0, 2));
        assert!(g.has_edge(1, 2));
        assert!(!g.has_edge(0, 1));
        assert_eq!(g.index_map()[&30], 2);
    }

    #[test]
    fn removing_a_node_keeps_ids() {
        let (g, _) = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let h = g.without_nodes(&[1]);
        assert_eq!(h.original_ids(), &[0, 2, 3]);
        assert_eq!(h.edge_count(), 2);
        assert!(h.has_edge(1, 2));
        assert!(h.has_edge(0, 2));
    }
}
