//! Correlation-based community detection.
//!
//! A node's fit to a community is scored from the 2×2 contingency table of
//! its neighbor vector against the community vector, either as the
//! Piatetsky-Shapiro rule interest (PS) or as the φ-coefficient. Detection
//! grows communities from triangle-rich seeds by local search on the sum of
//! community PS values, then merges communities greedily by φ gain.

pub mod cli;
pub mod detect;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod metrics;
pub mod null_model;
pub mod partition;
pub mod triangles;
pub mod truth;

pub use detect::{detect, DetectConfig};
pub use error::{Error, Result};
pub use graph::{load_edge_list, EdgeListOptions, Graph, IndexBase, NodeId};
pub use metrics::MergeMetric;
pub use partition::{CommunityId, Partition};
