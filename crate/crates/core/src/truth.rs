//! Reference community labels and partition file formats.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::partition::Partition;

/// Layout of a community file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruthFormat {
    /// `node label` per line.
    NodeLabel,
    /// One community per line, space-separated node ids.
    LinePerCommunity,
}

/// One label per node, keyed by the node's original id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundTruth {
    labels: BTreeMap<u64, String>,
}

impl GroundTruth {
    pub fn from_labels(labels: BTreeMap<u64, String>) -> Self {
        GroundTruth { labels }
    }

    /// Parses a community file. `#` starts a comment line. A node listed in
    /// two communities is an error (overlapping covers are not supported).
    pub fn parse<R: BufRead>(reader: R, format: TruthFormat) -> Result<Self> {
        let mut labels = BTreeMap::new();
        let mut community = 0usize;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let parse_id = |tok: &str| -> Result<u64> {
                tok.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("invalid node id {tok:?}"),
                })
            };
            match format {
                TruthFormat::NodeLabel => {
                    let mut tokens = trimmed.split_whitespace();
                    let node = parse_id(tokens.next().unwrap())?;
                    let label = tokens.next().ok_or_else(|| Error::Parse {
                        line: lineno,
                        message: "expected `node label`".into(),
                    })?;
                    if labels.insert(node, label.to_string()).is_some() {
                        return Err(Error::DuplicateNode(node));
                    }
                }
                TruthFormat::LinePerCommunity => {
                    for tok in trimmed.split_whitespace() {
                        let node = parse_id(tok)?;
                        if labels.insert(node, community.to_string()).is_some() {
                            return Err(Error::DuplicateNode(node));
                        }
                    }
                    community += 1;
                }
            }
        }
        Ok(GroundTruth { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, original_id: u64) -> Option<&str> {
        self.labels.get(&original_id).map(String::as_str)
    }

    pub fn node_ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.labels.keys().copied()
    }

    pub fn community_count(&self) -> usize {
        self.labels.values().collect::<BTreeSet<_>>().len()
    }

    /// Label index per dense node of `g`. Errors if a graph node has no label
    /// or a label refers to a node absent from the graph.
    pub fn align(&self, g: &Graph) -> Result<Vec<usize>> {
        let missing: Vec<u64> = g
            .original_ids()
            .iter()
            .copied()
            .filter(|id| !self.labels.contains_key(id))
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingLabels(missing));
        }
        let index = g.index_map();
        let unknown: Vec<u64> = self
            .labels
            .keys()
            .copied()
            .filter(|id| !index.contains_key(id))
            .collect();
        if !unknown.is_empty() {
            return Err(Error::UnknownNodes(unknown));
        }
        let names: BTreeMap<&str, usize> = self
            .labels
            .values()
            .map(String::as_str)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        Ok(g.original_ids()
            .iter()
            .map(|id| names[self.labels[id].as_str()])
            .collect())
    }

    /// Keeps only labels of nodes present in `g`.
    pub fn restricted_to(&self, g: &Graph) -> GroundTruth {
        let ids: BTreeSet<u64> = g.original_ids().iter().copied().collect();
        GroundTruth {
            labels: self
                .labels
                .iter()
                .filter(|(id, _)| ids.contains(id))
                .map(|(&id, l)| (id, l.clone()))
                .collect(),
        }
    }

    /// Builds the partition of `g` induced by the labels.
    pub fn to_partition(&self, g: &Graph) -> Result<Partition> {
        let aligned = self.align(g)?;
        let labels: Vec<Option<usize>> = aligned.into_iter().map(Some).collect();
        Ok(Partition::from_labels(g, &labels)?.compacted(g))
    }
}

/// Parses `text` as [`GroundTruth`] and checks it against `g`.
pub fn load_ground_truth<R: BufRead>(
    reader: R,
    format: TruthFormat,
    g: &Graph,
) -> Result<GroundTruth> {
    let truth = GroundTruth::parse(reader, format)?;
    truth.align(g)?;
    Ok(truth)
}

/// Output layout for a detected partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionFormat {
    /// One line per community, space-separated original ids.
    CommunityPerLine,
    /// `node<TAB>community` lines.
    NodeTab,
}

/// Writes assigned nodes with their original ids. Communities are numbered
/// `0..k` by smallest member.
pub fn write_partition<W: Write>(
    g: &Graph,
    p: &Partition,
    format: PartitionFormat,
    mut out: W,
) -> Result<()> {
    let groups = p.groups();
    match format {
        PartitionFormat::CommunityPerLine => {
            for group in &groups {
                let ids: Vec<String> = group
                    .iter()
                    .map(|&u| g.original_id(u).to_string())
                    .collect();
                writeln!(out, "{}", ids.join(" "))?;
            }
        }
        PartitionFormat::NodeTab => {
            let mut label = vec![None; g.node_count()];
            for (c, group) in groups.iter().enumerate() {
                for &u in group {
                    label[u] = Some(c);
                }
            }
            for u in g.nodes() {
                if let Some(c) = label[u] {
                    writeln!(out, "{}\t{}", g.original_id(u), c)?;
                }
            }
        }
    }
    Ok(())
}

/// Reads a partition file of either layout against `g`.
pub fn read_partition<R: BufRead>(
    reader: R,
    format: PartitionFormat,
    g: &Graph,
) -> Result<Partition> {
    let truth_format = match format {
        PartitionFormat::CommunityPerLine => TruthFormat::LinePerCommunity,
        PartitionFormat::NodeTab => TruthFormat::NodeLabel,
    };
    GroundTruth::parse(reader, truth_format)?.to_partition(g)
}

/// Nodes of `g` grouped by ground-truth label, in dense ids.
pub fn truth_groups(truth: &GroundTruth, g: &Graph) -> Result<Vec<Vec<NodeId>>> {
    Ok(truth.to_partition(g)?.groups())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_label_format() {
        let t = GroundTruth::parse("0 a\n1 a\n2 b".as_bytes(), TruthFormat::NodeLabel).unwrap();
        assert_eq!(t.label(0), Some("a"));
        assert_eq!(t.label(1), Some("a"));
        assert_eq!(t.label(2), Some("b"));
        assert_eq!(t.community_count(), 2);
    }

    #[test]
    fn line_per_community_format() {
        let t = GroundTruth::parse("0 1\n2".as_bytes(), TruthFormat::LinePerCommunity).unwrap();
        assert_eq!(t.label(0), Some("0"));
        assert_eq!(t.label(1), Some("0"));
        assert_eq!(t.label(2), Some("1"));
    }

    #[test]
    fn missing_and_unknown_nodes() {
        let (g, _) = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let t = GroundTruth::parse("0 a\n1 a".as_bytes(), TruthFormat::NodeLabel).unwrap();
        match t.align(&g) {
            Err(Error::MissingLabels(ids)) => assert_eq!(ids, vec![2]),
            other => panic!("unexpected {other:?}"),
        }
        let t =
            GroundTruth::parse("0 a\n1 a\n2 b\n9 c".as_bytes(), TruthFormat::NodeLabel).unwrap();
        assert!(matches!(t.align(&g), Err(Error::UnknownNodes(ids)) if ids == vec![9]));
    }

    #[test]
    fn overlapping_cover_is_rejected() {
        let r = GroundTruth::parse("0 1\n1 2".as_bytes(), TruthFormat::LinePerCommunity);
        assert!(matches!(r, Err(Error::DuplicateNode(1))));
    }

    #[test]
    fn partition_file_round_trip() {
        let (g, _) = Graph::from_edges(4, &[(0, 1), (2, 3), (1, 2)]);
        let p = Partition::from_groups(&g, &[vec![2, 3], vec![1, 0]]).unwrap();
        for format in [PartitionFormat::CommunityPerLine, PartitionFormat::NodeTab] {
            let mut buf = Vec::new();
            write_partition(&g, &p, format, &mut buf).unwrap();
            let q = read_partition(buf.as_slice(), format, &g).unwrap();
            assert_eq!(q.groups(), p.groups());
        }
        let mut buf = Vec::new();
        write_partition(&g, &p, PartitionFormat::CommunityPerLine, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0 1\n2 3\n");
    }
}
