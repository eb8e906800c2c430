//! Row-clustered storage: cluster assignments, the clustered matrix format
//! with placeholder slots, memory-footprint accounting and a binary dump.

mod assignment;
mod binary;
mod csr_cluster;
mod footprint;

pub use assignment::ClusterAssignment;
pub use binary::{read_csr_cluster, write_csr_cluster, MAGIC, VERSION};
pub use csr_cluster::{build_csr_cluster, cluster_to_csr, ClusterView, CsrClusterMatrix};
pub use footprint::{csr_bytes, footprint, footprint_with, FootprintReport, IndexWidth};
