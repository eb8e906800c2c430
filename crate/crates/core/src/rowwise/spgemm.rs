use rayon::prelude::*;

use super::HashAccumulator;
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

pub(crate) fn check_inner_dims(a: &CsrMatrix, b: &CsrMatrix) -> Result<()> {
    if a.ncols() != b.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(())
}

pub(crate) fn check_inner_dims_clustered(
    a: &crate::format::CsrClusterMatrix,
    b: &CsrMatrix,
) -> Result<()> {
    if a.ncols() != b.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(())
}

/// Upper bound on the output nnz of row `i` of `a * b`: the total length of
/// the B rows it touches.
#[inline]
pub fn row_upper_bound(a: &CsrMatrix, b: &CsrMatrix, i: usize) -> usize {
    a.row_cols(i).iter().map(|&k| b.row_nnz(k)).sum()
}

fn symbolic_row(acc: &mut HashAccumulator, a: &CsrMatrix, b: &CsrMatrix, i: usize) -> usize {
    acc.prepare(row_upper_bound(a, b, i));
    for &k in a.row_cols(i) {
        for &j in b.row_cols(k) {
            acc.insert_key(j);
        }
    }
    let n = acc.len();
    acc.clear();
    n
}

/// Exact number of structural nonzeros in each row of `a * b`.
pub fn spgemm_symbolic(a: &CsrMatrix, b: &CsrMatrix) -> Result<Vec<usize>> {
    check_inner_dims(a, b)?;
    Ok((0..a.nrows())
        .into_par_iter()
        .map_init(HashAccumulator::new, |acc, i| symbolic_row(acc, a, b, i))
        .collect())
}

/// Splits CSR payload arrays into one disjoint mutable span per row.
pub(crate) fn split_rows_mut<'a, T, U>(
    row_ptr: &[usize],
    mut cols: &'a mut [T],
    mut vals: &'a mut [U],
) -> Vec<(&'a mut [T], &'a mut [U])> {
    let mut out = Vec::with_capacity(row_ptr.len().saturating_sub(1));
    for w in row_ptr.windows(2) {
        let len = w[1] - w[0];
        let (c, rest_c) = std::mem::take(&mut cols).split_at_mut(len);
        let (v, rest_v) = std::mem::take(&mut vals).split_at_mut(len);
        cols = rest_c;
        vals = rest_v;
        out.push((c, v));
    }
    out
}

/// `C = A * B` by Gustavson's row-wise algorithm.
///
/// A symbolic pass sizes `C` exactly, then a numeric pass fills each row
/// through a private hash accumulator. Rows are independent and computed in
/// parallel on the current rayon pool. Products that cancel to 0.0 stay in
/// the structure.
pub fn spgemm_rowwise(a: &CsrMatrix, b: &CsrMatrix) -> Result<CsrMatrix> {
    let counts = spgemm_symbolic(a, b)?;
    let mut row_ptr = Vec::with_capacity(a.nrows() + 1);
    row_ptr.push(0);
    for c in &counts {
        row_ptr.push(row_ptr.last().unwrap() + c);
    }
    let nnz = *row_ptr.last().unwrap();
    let mut col_idx = vec![0usize; nnz];
    let mut values = vec![0.0f64; nnz];

    split_rows_mut(&row_ptr, &mut col_idx, &mut values)
        .into_par_iter()
        .enumerate()
        .for_each_init(HashAccumulator::new, |acc, (i, (cols, vals))| {
            acc.prepare(cols.len());
            let (a_cols, a_vals) = a.row(i);
            for (&k, &a_ik) in a_cols.iter().zip(a_vals) {
                let (b_cols, b_vals) = b.row(k);
                for (&j, &b_kj) in b_cols.iter().zip(b_vals) {
                    acc.accumulate(j, a_ik * b_kj);
                }
            }
            acc.drain_sorted_into(cols, vals);
        });

    Ok(CsrMatrix::from_parts(
        a.nrows(),
        b.ncols(),
        row_ptr,
        col_idx,
        values,
    ))
}

#[inline]
pub(crate) fn jaccard_from_counts(inter: usize, nx: usize, ny: usize) -> f64 {
    let union = nx + ny - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Jaccard similarity of two sorted, duplicate-free index sets.
pub(crate) fn jaccard_sorted(x: &[usize], y: &[usize]) -> f64 {
    let (mut p, mut q, mut inter) = (0, 0, 0);
    while p < x.len() && q < y.len() {
        match x[p].cmp(&y[q]) {
            std::cmp::Ordering::Less => p += 1,
            std::cmp::Ordering::Greater => q += 1,
            std::cmp::Ordering::Equal => {
                inter += 1;
                p += 1;
                q += 1;
            }
        }
    }
    jaccard_from_counts(inter, x.len(), y.len())
}

/// `|cols(i) ∩ cols(j)| / |cols(i) ∪ cols(j)|`, or 0 when both rows are empty.
pub fn jaccard_similarity(a: &CsrMatrix, i: usize, j: usize) -> Result<f64> {
    if i >= a.nrows() || j >= a.nrows() {
        return Err(Error::InvalidArgument(format!(
            "row pair ({i}, {j}) out of range for {} rows",
            a.nrows()
        )));
    }
    Ok(jaccard_sorted(a.row_cols(i), a.row_cols(j)))
}
