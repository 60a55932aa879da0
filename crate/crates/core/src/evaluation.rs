//! Normalized mutual information between disjoint partitions.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::truth::GroundTruth;

/// Co-occurrence counts: `counts[i][j]` nodes are in block `i` of the first
/// partition and block `j` of the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<usize>>,
    pub row_sums: Vec<usize>,
    pub col_sums: Vec<usize>,
    pub total: usize,
}

impl ConfusionMatrix {
    /// Builds the matrix from two aligned label vectors. Labels are
    /// renumbered densely in ascending order.
    pub fn from_labels(a: &[usize], b: &[usize]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidParameter(format!(
                "label vectors differ in length ({} vs {})",
                a.len(),
                b.len()
            )));
        }
        let ra = dense(a);
        let rb = dense(b);
        let rows = ra.iter().max().map_or(0, |&x| x + 1);
        let cols = rb.iter().max().map_or(0, |&x| x + 1);
        let mut counts = vec![vec![0; cols]; rows];
        for (&i, &j) in ra.iter().zip(&rb) {
            counts[i][j] += 1;
        }
        let row_sums = counts.iter().map(|r| r.iter().sum()).collect();
        let col_sums = (0..cols)
            .map(|j| counts.iter().map(|r| r[j]).sum())
            .collect();
        Ok(ConfusionMatrix {
            counts,
            row_sums,
            col_sums,
            total: a.len(),
        })
    }

    /// `2I(X;Y) / (H(X) + H(Y))`, natural logs. Two single-block partitions
    /// give 1; a single block against several gives 0.
    pub fn nmi(&self) -> f64 {
        if self.total == 0 {
            return 1.0;
        }
        let n = self.total as f64;
        let entropy = |sums: &[usize]| -> f64 {
            sums.iter()
                .filter(|&&s| s > 0)
                .map(|&s| {
                    let q = s as f64 / n;
                    -q * q.ln()
                })
                .sum()
        };
        let hx = entropy(&self.row_sums);
        let hy = entropy(&self.col_sums);
        if hx + hy == 0.0 {
            return 1.0;
        }
        let mut mi = 0.0;
        for (i, row) in self.counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c > 0 {
                    let c = c as f64;
                    mi +=
                        c / n * (c * n / (self.row_sums[i] as f64 * self.col_sums[j] as f64)).ln();
                }
            }
        }
        (2.0 * mi / (hx + hy)).clamp(0.0, 1.0)
    }
}

fn dense(labels: &[usize]) -> Vec<usize> {
    let distinct: BTreeSet<usize> = labels.iter().copied().collect();
    let index: BTreeMap<usize, usize> = distinct
        .into_iter()
        .enumerate()
        .map(|(i, l)| (l, i))
        .collect();
    labels.iter().map(|l| index[l]).collect()
}

/// NMI of two aligned label vectors.
pub fn nmi_labels(a: &[usize], b: &[usize]) -> Result<f64> {
    Ok(ConfusionMatrix::from_labels(a, b)?.nmi())
}

fn detected_labels(g: &Graph, detected: &Partition) -> Result<Vec<usize>> {
    let missing: Vec<u64> = detected
        .unassigned_nodes()
        .map(|u| g.original_id(u))
        .collect();
    if !missing.is_empty() {
        return Err(Error::CoverageMismatch(missing));
    }
    Ok(detected
        .labels()
        .into_iter()
        .map(|l| l.expect("fully assigned"))
        .collect())
}

/// Confusion matrix of a detected partition (rows) against ground truth
/// (columns).
pub fn confusion(g: &Graph, detected: &Partition, truth: &GroundTruth) -> Result<ConfusionMatrix> {
    let a = detected_labels(g, detected)?;
    let b = truth.align(g)?;
    ConfusionMatrix::from_labels(&a, &b)
}

/// NMI of a fully assigned partition against ground truth covering the
/// same nodes.
pub fn nmi(g: &Graph, detected: &Partition, truth: &GroundTruth) -> Result<f64> {
    Ok(confusion(g, detected, truth)?.nmi())
}

/// NMI of two labelings keyed by original node id. Both must cover the same
/// node set.
pub fn nmi_between(a: &GroundTruth, b: &GroundTruth) -> Result<f64> {
    let ids_a: BTreeSet<u64> = a.node_ids().collect();
    let ids_b: BTreeSet<u64> = b.node_ids().collect();
    let uncovered: Vec<u64> = ids_a.symmetric_difference(&ids_b).copied().collect();
    if !uncovered.is_empty() {
        return Err(Error::CoverageMismatch(uncovered));
    }
    let mut names_a = BTreeMap::new();
    let mut names_b = BTreeMap::new();
    let mut la = Vec::with_capacity(ids_a.len());
    let mut lb = Vec::with_capacity(ids_a.len());
    for id in ids_a {
        let next = names_a.len();
        la.push(
            *names_a
                .entry(a.label(id).expect("id from a"))
                .or_insert(next),
        );
        let next = names_b.len();
        lb.push(
            *names_b
                .entry(b.label(id).expect("same node set"))
                .or_insert(next),
        );
    }
    nmi_labels(&la, &lb)
}
