//! Benchmark and verification driver for the cluster-wise SpGEMM kernels.
//!
//! A run loads a matrix, builds the workload operands (`A` itself, or BFS
//! frontier matrices), applies the chosen reordering and clustering, checks
//! the variant against row-wise multiplication on the original order, and
//! then times both sides. Results are flat CSV rows.

pub mod cli;
pub mod config;
pub mod error;
pub mod frontier;
pub mod harness;
pub mod pipeline;
pub mod report;

pub use config::{BenchConfig, Clustering, Workload};
pub use error::{BenchError, Result};
pub use frontier::generate_frontiers;
pub use harness::{bench_matrix, run_bench, verify_mode, VerifyReport};
pub use pipeline::Pipeline;
pub use report::{append_report, load_reports, read_reports, BenchReport};
