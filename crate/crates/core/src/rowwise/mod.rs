//! Gustavson row-wise SpGEMM over a hash-table sparse accumulator, and the
//! streaming top-k similarity variant used to seed hierarchical clustering.

mod accumulator;
mod spgemm;
mod topk;

pub use accumulator::HashAccumulator;
pub use spgemm::{
    jaccard_similarity, row_upper_bound, spgemm_rowwise, spgemm_symbolic,
};
pub use topk::{spgemm_topk, spgemm_topk_rows, CandidatePair};

pub(crate) use spgemm::{check_inner_dims_clustered, jaccard_sorted};
