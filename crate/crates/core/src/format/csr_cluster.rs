use super::ClusterAssignment;
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Row-clustered sparse matrix.
///
/// Each cluster stores the sorted union of its member rows' columns once.
/// Values of a cluster with `K` rows and `P` merged columns occupy `K * P`
/// slots laid out column-major: slot `p * K + l` holds row `l`'s value at
/// merged column `p`, or a 0.0 placeholder whose `valid` bit is clear.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrClusterMatrix {
    nrows: usize,
    ncols: usize,
    cluster_sizes: Vec<usize>,
    cluster_col_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    value_ptr: Vec<usize>,
    values: Vec<f64>,
    valid: Vec<u64>,
    row_map: Vec<usize>,
}

/// Borrowed view of one cluster.
#[derive(Clone, Copy, Debug)]
pub struct ClusterView<'a> {
    /// Original row indices of the members, in storage order.
    pub rows: &'a [usize],
    /// Merged column list.
    pub cols: &'a [usize],
    /// `rows.len() * cols.len()` slots, column-major.
    pub values: &'a [f64],
    slot_offset: usize,
    valid: &'a [u64],
}

impl<'a> ClusterView<'a> {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Whether member `l` has a stored entry at merged column position `p`.
    #[inline]
    pub fn is_valid(&self, p: usize, l: usize) -> bool {
        let slot = self.slot_offset + p * self.rows.len() + l;
        self.valid[slot / 64] >> (slot % 64) & 1 == 1
    }

    /// The `K` value slots for merged column position `p`.
    #[inline]
    pub fn column_values(&self, p: usize) -> &'a [f64] {
        let k = self.rows.len();
        &self.values[p * k..(p + 1) * k]
    }
}

#[inline]
fn bit(words: &[u64], slot: usize) -> bool {
    words[slot / 64] >> (slot % 64) & 1 == 1
}

impl CsrClusterMatrix {
    /// Assembles a matrix from its arrays, validating every structural invariant.
    #[allow(clippy::too_many_arguments)]
    pub fn from_raw(
        nrows: usize,
        ncols: usize,
        cluster_sizes: Vec<usize>,
        cluster_col_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        value_ptr: Vec<usize>,
        values: Vec<f64>,
        valid: Vec<u64>,
        row_map: Vec<usize>,
    ) -> Result<Self> {
        let m = CsrClusterMatrix {
            nrows,
            ncols,
            cluster_sizes,
            cluster_col_ptr,
            col_idx,
            value_ptr,
            values,
            valid,
            row_map,
        };
        m.check()?;
        Ok(m)
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        nrows: usize,
        ncols: usize,
        cluster_sizes: Vec<usize>,
        cluster_col_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        value_ptr: Vec<usize>,
        values: Vec<f64>,
        valid: Vec<u64>,
        row_map: Vec<usize>,
    ) -> Self {
        let m = CsrClusterMatrix {
            nrows,
            ncols,
            cluster_sizes,
            cluster_col_ptr,
            col_idx,
            value_ptr,
            values,
            valid,
            row_map,
        };
        debug_assert!(m.check().is_ok(), "{:?}", m.check());
        m
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Format(msg));
        let nc = self.cluster_sizes.len();
        if self.cluster_col_ptr.len() != nc + 1 || self.value_ptr.len() != nc + 1 {
            return bad("pointer arrays must have nclusters + 1 entries".into());
        }
        if self.cluster_col_ptr[0] != 0 || self.value_ptr[0] != 0 {
            return bad("pointer arrays must start at 0".into());
        }
        if self.cluster_col_ptr[nc] != self.col_idx.len() || self.value_ptr[nc] != self.values.len()
        {
            return bad("pointer arrays must end at their payload length".into());
        }
        if self.valid.len() != self.values.len().div_ceil(64) {
            return bad("validity mask length does not match slot count".into());
        }
        if !self.values.len().is_multiple_of(64) {
            if let Some(&last) = self.valid.last() {
                if last >> (self.values.len() % 64) != 0 {
                    return bad("validity mask has bits past the last slot".into());
                }
            }
        }
        if self.cluster_sizes.iter().sum::<usize>() != self.nrows
            || self.row_map.len() != self.nrows
        {
            return bad("cluster sizes must sum to nrows".into());
        }
        let mut seen = vec![false; self.nrows];
        for &r in &self.row_map {
            if r >= self.nrows || std::mem::replace(&mut seen[r], true) {
                return bad(format!("row_map entry {r} repeated or out of range"));
            }
        }
        for c in 0..nc {
            let (lo, hi) = (self.cluster_col_ptr[c], self.cluster_col_ptr[c + 1]);
            if lo > hi {
                return bad(format!("cluster {c} column pointer decreases"));
            }
            if self.cluster_sizes[c] == 0 {
                return bad(format!("cluster {c} is empty"));
            }
            let cols = &self.col_idx[lo..hi];
            if cols.windows(2).any(|w| w[0] >= w[1]) || cols.last().is_some_and(|&j| j >= self.ncols)
            {
                return bad(format!("cluster {c} columns not sorted or out of range"));
            }
            if self.value_ptr[c + 1] < self.value_ptr[c]
                || self.value_ptr[c + 1] - self.value_ptr[c] != self.cluster_sizes[c] * (hi - lo)
            {
                return bad(format!("cluster {c} value span has wrong length"));
            }
        }
        Ok(())
    }

    pub fn nclusters(&self) -> usize {
        self.cluster_sizes.len()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn cluster_sizes(&self) -> &[usize] {
        &self.cluster_sizes
    }

    pub fn cluster_col_ptr(&self) -> &[usize] {
        &self.cluster_col_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn value_ptr(&self) -> &[usize] {
        &self.value_ptr
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn valid_words(&self) -> &[u64] {
        &self.valid
    }

    pub fn row_map(&self) -> &[usize] {
        &self.row_map
    }

    pub fn slot_count(&self) -> usize {
        self.values.len()
    }

    pub fn is_valid_slot(&self, slot: usize) -> bool {
        bit(&self.valid, slot)
    }

    /// Number of slots holding a real entry.
    pub fn valid_count(&self) -> usize {
        self.valid.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn placeholder_count(&self) -> usize {
        self.slot_count() - self.valid_count()
    }

    /// Offset of each cluster's first member in `row_map` (length `nclusters + 1`).
    pub fn cluster_row_offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.nclusters() + 1);
        off.push(0);
        for &s in &self.cluster_sizes {
            off.push(off.last().unwrap() + s);
        }
        off
    }

    pub fn views(&self) -> Vec<ClusterView<'_>> {
        let off = self.cluster_row_offsets();
        (0..self.nclusters())
            .map(|c| self.view_at(c, off[c]))
            .collect()
    }

    fn view_at(&self, c: usize, row_offset: usize) -> ClusterView<'_> {
        let (vlo, vhi) = (self.value_ptr[c], self.value_ptr[c + 1]);
        ClusterView {
            rows: &self.row_map[row_offset..row_offset + self.cluster_sizes[c]],
            cols: &self.col_idx[self.cluster_col_ptr[c]..self.cluster_col_ptr[c + 1]],
            values: &self.values[vlo..vhi],
            slot_offset: vlo,
            valid: &self.valid,
        }
    }

    /// The assignment this matrix was built with.
    pub fn assignment(&self) -> ClusterAssignment {
        let off = self.cluster_row_offsets();
        let clusters = (0..self.nclusters())
            .map(|c| self.row_map[off[c]..off[c + 1]].to_vec())
            .collect();
        ClusterAssignment::new(self.nrows, clusters)
            .expect("row_map of a valid matrix is a partition")
    }
}

/// Groups the rows of `a` by `asg` into the clustered format.
pub fn build_csr_cluster(a: &CsrMatrix, asg: &ClusterAssignment) -> Result<CsrClusterMatrix> {
    if asg.nrows() != a.nrows() {
        return Err(Error::InvalidAssignment(format!(
            "assignment covers {} rows, matrix has {}",
            asg.nrows(),
            a.nrows()
        )));
    }
    let nc = asg.len();
    let mut cluster_sizes = Vec::with_capacity(nc);
    let mut cluster_col_ptr = Vec::with_capacity(nc + 1);
    let mut value_ptr = Vec::with_capacity(nc + 1);
    let mut col_idx = Vec::new();
    let mut row_map = Vec::with_capacity(a.nrows());
    cluster_col_ptr.push(0);
    value_ptr.push(0);

    for members in asg.clusters() {
        let start = col_idx.len();
        for &r in members {
            col_idx.extend_from_slice(a.row_cols(r));
        }
        col_idx[start..].sort_unstable();
        let mut w = start;
        for p in start..col_idx.len() {
            if w == start || col_idx[w - 1] != col_idx[p] {
                col_idx[w] = col_idx[p];
                w += 1;
            }
        }
        col_idx.truncate(w);
        cluster_col_ptr.push(col_idx.len());
        cluster_sizes.push(members.len());
        value_ptr.push(value_ptr.last().unwrap() + members.len() * (w - start));
        row_map.extend_from_slice(members);
    }

    let nslots = *value_ptr.last().unwrap();
    let mut values = vec![0.0; nslots];
    let mut valid = vec![0u64; nslots.div_ceil(64)];
    for (c, members) in asg.clusters().iter().enumerate() {
        let k = members.len();
        let merged = &col_idx[cluster_col_ptr[c]..cluster_col_ptr[c + 1]];
        for (l, &r) in members.iter().enumerate() {
            let (cols, vals) = a.row(r);
            let mut p = 0;
            for (&j, &v) in cols.iter().zip(vals) {
                while merged[p] != j {
                    p += 1;
                }
                let slot = value_ptr[c] + p * k + l;
                values[slot] = v;
                valid[slot / 64] |= 1 << (slot % 64);
            }
        }
    }

    Ok(CsrClusterMatrix::from_parts(
        a.nrows(),
        a.ncols(),
        cluster_sizes,
        cluster_col_ptr,
        col_idx,
        value_ptr,
        values,
        valid,
        row_map,
    ))
}

/// Back to CSR over original row indices, keeping only valid slots.
pub fn cluster_to_csr(m: &CsrClusterMatrix) -> CsrMatrix {
    let views = m.views();
    let mut counts = vec![0usize; m.nrows() + 1];
    for v in &views {
        for (l, &r) in v.rows.iter().enumerate() {
            counts[r + 1] = (0..v.cols.len()).filter(|&p| v.is_valid(p, l)).count();
        }
    }
    for i in 0..m.nrows() {
        counts[i + 1] += counts[i];
    }
    let nnz = counts[m.nrows()];
    let mut col_idx = vec![0usize; nnz];
    let mut values = vec![0.0; nnz];
    for v in &views {
        for (l, &r) in v.rows.iter().enumerate() {
            let mut dst = counts[r];
            for (p, &j) in v.cols.iter().enumerate() {
                if v.is_valid(p, l) {
                    col_idx[dst] = j;
                    values[dst] = v.column_values(p)[l];
                    dst += 1;
                }
            }
        }
    }
    CsrMatrix::from_parts(m.nrows(), m.ncols(), counts, col_idx, values)
}
