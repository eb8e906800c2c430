//! Coordinate and compressed-sparse-row storage, Matrix Market I/O and the
//! structural utilities the kernels share.

mod coo;
mod csr;
pub mod mtx;
mod permutation;

pub use coo::CooMatrix;
pub use csr::{csr_equal_canonical, first_mismatch, CsrMatrix, Mismatch};
pub use mtx::{load_matrix_market, read_matrix_market, write_matrix_market};
pub use permutation::{load_permutation, read_permutation, write_permutation, Permutation};
