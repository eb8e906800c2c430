//! Sparse matrix-matrix multiplication with row clustering.
//!
//! The crate provides a baseline Gustavson row-wise SpGEMM, a clustered
//! storage format that groups similar rows and stores their merged column
//! list once, and a cluster-wise SpGEMM kernel that reuses each fetched row
//! of `B` across every row of a cluster. Clusters come from fixed-length
//! blocks, a variable-length similarity scan, or hierarchical merging of
//! top-k similar row pairs; rows can be reordered beforehand by random
//! shuffle, degree, reverse Cuthill-McKee or an external permutation.
//!
//! ```
//! use clusterwise_spgemm::prelude::*;
//!
//! let a = CsrMatrix::identity(4);
//! let asg = variable_length_clusters(&a, &ClusterParams::default()).unwrap();
//! let ac = build_csr_cluster(&a, &asg).unwrap();
//! let c = spgemm_clusterwise(&ac, &a).unwrap();
//! assert!(csr_equal_canonical(&cluster_to_csr(&c), &spgemm_rowwise(&a, &a).unwrap(), 1e-12));
//! ```

pub mod cluster_spgemm;
pub mod clustering;
pub mod error;
pub mod format;
pub mod reorder;
pub mod rowwise;
pub mod sparse;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::cluster_spgemm::{
        clusterwise_access_stats, rowwise_access_stats, spgemm_clusterwise,
        spgemm_clusterwise_instrumented, AccessStats,
    };
    pub use crate::clustering::{
        assignment_to_permutation, fixed_length_clusters, hierarchical_clusters,
        variable_length_clusters, ClusterParams,
    };
    pub use crate::format::{
        build_csr_cluster, cluster_to_csr, footprint, ClusterAssignment, CsrClusterMatrix,
        FootprintReport,
    };
    pub use crate::reorder::{bandwidth, reorder_degree, reorder_random, reorder_rcm, ReorderSpec};
    pub use crate::rowwise::{jaccard_similarity, spgemm_rowwise, spgemm_symbolic, spgemm_topk};
    pub use crate::sparse::{csr_equal_canonical, CooMatrix, CsrMatrix, Permutation};
    pub use crate::{Error, Result};
}
