//! Cluster construction: fixed-length blocks of consecutive rows, a
//! variable-length scan against a representative row, and hierarchical
//! merging of top-k similar row pairs.

mod disjoint_set;
mod fixed;
mod hierarchical;
mod variable;

pub use disjoint_set::DisjointSet;
pub use fixed::fixed_length_clusters;
pub use hierarchical::{
    hierarchical_clusters, hierarchical_clusters_traced, MergeEvent, Rescore,
};
pub use variable::{variable_length_clusters, variable_length_scan};

use crate::error::{Error, Result};
use crate::format::ClusterAssignment;
use crate::sparse::Permutation;

pub const DEFAULT_JACC_TH: f64 = 0.3;
pub const DEFAULT_MAX_CLUSTER: usize = 8;
pub const DEFAULT_FIXED_LEN: usize = 4;

/// Thresholds shared by the clustering strategies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClusterParams {
    /// Minimum Jaccard similarity for two rows to share a cluster.
    pub jacc_th: f64,
    /// Upper bound on rows per cluster.
    pub max_cluster_th: usize,
    /// Rows per cluster for fixed-length clustering.
    pub fixed_len: usize,
}

impl Default for ClusterParams {
    fn default() -> Self {
        ClusterParams {
            jacc_th: DEFAULT_JACC_TH,
            max_cluster_th: DEFAULT_MAX_CLUSTER,
            fixed_len: DEFAULT_FIXED_LEN,
        }
    }
}

impl ClusterParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.jacc_th) {
            return Err(Error::InvalidArgument(format!(
                "jacc_th {} outside [0, 1]",
                self.jacc_th
            )));
        }
        if self.max_cluster_th == 0 || self.fixed_len == 0 {
            return Err(Error::InvalidArgument(
                "cluster size limits must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Rows in cluster order: cluster 0's members first, then cluster 1's, ...
pub fn assignment_to_permutation(asg: &ClusterAssignment) -> Permutation {
    asg.to_permutation()
}
