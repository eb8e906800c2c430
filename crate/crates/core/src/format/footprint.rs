use super::CsrClusterMatrix;
use crate::sparse::CsrMatrix;

const VALUE_BYTES: usize = 8;
const MASK_WORD_BYTES: usize = 8;

/// Width of stored indices and offsets used for byte accounting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexWidth {
    U32,
    U64,
}

impl IndexWidth {
    pub fn bytes(self) -> usize {
        match self {
            IndexWidth::U32 => 4,
            IndexWidth::U64 => 8,
        }
    }

    /// 32-bit unless some count reaches 2^31.
    pub fn for_len(len: usize) -> Self {
        if len >= 1 << 31 {
            IndexWidth::U64
        } else {
            IndexWidth::U32
        }
    }
}

/// Storage cost of a clustered matrix relative to its CSR source.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FootprintReport {
    pub csr_bytes: usize,
    pub cluster_bytes: usize,
    /// `cluster_bytes / csr_bytes`.
    pub ratio: f64,
    /// Cost without the per-cluster size array, reported when every cluster
    /// but the last has the same size and rows keep their original order.
    pub fixed_length_bytes: Option<usize>,
}

pub fn csr_bytes(a: &CsrMatrix, width: IndexWidth) -> usize {
    let iw = width.bytes();
    (a.nrows() + 1) * iw + a.nnz() * iw + a.nnz() * VALUE_BYTES
}

fn cluster_bytes(m: &CsrClusterMatrix, iw: usize) -> usize {
    let index_entries = m.cluster_sizes().len()
        + m.cluster_col_ptr().len()
        + m.col_idx().len()
        + m.value_ptr().len()
        + m.row_map().len();
    index_entries * iw + m.values().len() * VALUE_BYTES + m.valid_words().len() * MASK_WORD_BYTES
}

fn is_fixed_length(m: &CsrClusterMatrix) -> bool {
    let sizes = m.cluster_sizes();
    let Some(&k) = sizes.first() else {
        return true;
    };
    let (last, body) = sizes.split_last().unwrap();
    body.iter().all(|&s| s == k)
        && *last <= k
        && m.row_map().iter().enumerate().all(|(i, &r)| i == r)
}

pub fn footprint_with(a: &CsrMatrix, m: &CsrClusterMatrix, width: IndexWidth) -> FootprintReport {
    let csr = csr_bytes(a, width);
    let cluster = cluster_bytes(m, width.bytes());
    FootprintReport {
        csr_bytes: csr,
        cluster_bytes: cluster,
        ratio: cluster as f64 / csr as f64,
        fixed_length_bytes: is_fixed_length(m)
            .then(|| cluster - m.cluster_sizes().len() * width.bytes()),
    }
}

/// Byte accounting with the index width chosen from the matrix size.
pub fn footprint(a: &CsrMatrix, m: &CsrClusterMatrix) -> FootprintReport {
    let width = IndexWidth::for_len(a.nnz().max(m.slot_count()));
    footprint_with(a, m, width)
}
