use std::fmt;

use super::{CooMatrix, Permutation};
use crate::error::{Error, Result};

/// Compressed sparse row matrix with sorted, duplicate-free rows.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds a matrix from raw arrays, checking every structural invariant.
    pub fn new(
        nrows: usize,
        ncols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let m = CsrMatrix {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        };
        m.check()?;
        Ok(m)
    }

    /// Builds a matrix whose invariants the caller already guarantees.
    pub(crate) fn from_parts(
        nrows: usize,
        ncols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Self {
        let m = CsrMatrix {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        };
        debug_assert!(m.check().is_ok(), "{:?}", m.check());
        m
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self::from_parts(nrows, ncols, vec![0; nrows + 1], Vec::new(), Vec::new())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_parts(n, n, (0..=n).collect(), (0..n).collect(), vec![1.0; n])
    }

    /// Converts coordinate triplets to CSR, summing duplicate positions.
    pub fn from_coo(coo: &CooMatrix) -> Self {
        let nrows = coo.nrows();
        let mut counts = vec![0usize; nrows + 1];
        for &(r, _, _) in coo.entries() {
            counts[r + 1] += 1;
        }
        for i in 0..nrows {
            counts[i + 1] += counts[i];
        }
        // Bucket by row, keeping input order so duplicate sums are deterministic.
        let mut next = counts.clone();
        let mut staged = vec![(0usize, 0.0f64); coo.len()];
        for &(r, c, v) in coo.entries() {
            staged[next[r]] = (c, v);
            next[r] += 1;
        }

        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::with_capacity(coo.len());
        let mut values = Vec::with_capacity(coo.len());
        row_ptr.push(0);
        for i in 0..nrows {
            let row = &mut staged[counts[i]..counts[i + 1]];
            row.sort_by_key(|&(c, _)| c);
            for &(c, v) in row.iter() {
                if col_idx.len() > *row_ptr.last().unwrap() && *col_idx.last().unwrap() == c {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self::from_parts(nrows, coo.ncols(), row_ptr, col_idx, values)
    }

    pub fn to_coo(&self) -> CooMatrix {
        let entries = self.iter().collect();
        CooMatrix::from_entries(self.nrows, self.ncols, entries)
            .expect("CSR entries are in bounds")
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidCsr(msg));
        if self.row_ptr.len() != self.nrows + 1 {
            return bad(format!(
                "row_ptr has length {}, expected {}",
                self.row_ptr.len(),
                self.nrows + 1
            ));
        }
        if self.row_ptr[0] != 0 {
            return bad("row_ptr[0] != 0".into());
        }
        if self.col_idx.len() != self.values.len() {
            return bad("col_idx and values differ in length".into());
        }
        if self.row_ptr[self.nrows] != self.col_idx.len() {
            return bad("row_ptr[nrows] != nnz".into());
        }
        for i in 0..self.nrows {
            let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
            if lo > hi {
                return bad(format!("row_ptr decreases at row {i}"));
            }
            let cols = &self.col_idx[lo..hi];
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("row {i} columns not strictly increasing"));
            }
            if let Some(&c) = cols.last() {
                if c >= self.ncols {
                    return bad(format!("row {i} has column {c} >= ncols {}", self.ncols));
                }
            }
        }
        Ok(())
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    #[inline]
    pub fn row_cols(&self, i: usize) -> &[usize] {
        &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    #[inline]
    pub fn row_nnz(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    /// Looks up a stored entry.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).ok().map(|p| vals[p])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn transpose(&self) -> CsrMatrix {
        let mut row_ptr = vec![0usize; self.ncols + 1];
        for &c in &self.col_idx {
            row_ptr[c + 1] += 1;
        }
        for j in 0..self.ncols {
            row_ptr[j + 1] += row_ptr[j];
        }
        let mut next = row_ptr.clone();
        let mut col_idx = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        // Rows visited in ascending order keep each output row sorted.
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let dst = next[j];
                col_idx[dst] = i;
                values[dst] = v;
                next[j] += 1;
            }
        }
        Self::from_parts(self.ncols, self.nrows, row_ptr, col_idx, values)
    }

    /// Same structure with every stored value set to 1.0.
    pub fn binarize(&self) -> CsrMatrix {
        CsrMatrix {
            values: vec![1.0; self.nnz()],
            ..self.clone()
        }
    }

    /// Symmetric permutation: entry `(i, j)` moves to `(inv[i], inv[j])`.
    pub fn permute_symmetric(&self, p: &Permutation) -> Result<CsrMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                nrows: self.nrows,
                ncols: self.ncols,
            });
        }
        if p.len() != self.nrows {
            return Err(Error::DimensionMismatch(format!(
                "permutation of size {} applied to {} rows",
                p.len(),
                self.nrows
            )));
        }
        let inv = p.inverse_map();
        let mut row_ptr = Vec::with_capacity(self.nrows + 1);
        let mut col_idx = Vec::with_capacity(self.nnz());
        let mut values = Vec::with_capacity(self.nnz());
        let mut scratch: Vec<(usize, f64)> = Vec::new();
        row_ptr.push(0);
        for &old in p.forward_map() {
            let (cols, vals) = self.row(old);
            scratch.clear();
            scratch.extend(cols.iter().zip(vals).map(|(&c, &v)| (inv[c], v)));
            scratch.sort_unstable_by_key(|&(c, _)| c);
            for &(c, v) in &scratch {
                col_idx.push(c);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self::from_parts(
            self.nrows, self.ncols, row_ptr, col_idx, values,
        ))
    }

    /// Row permutation: row `i` moves to position `inv[i]`; columns unchanged.
    pub fn permute_rows(&self, p: &Permutation) -> Result<CsrMatrix> {
        if p.len() != self.nrows {
            return Err(Error::DimensionMismatch(format!(
                "permutation of size {} applied to {} rows",
                p.len(),
                self.nrows
            )));
        }
        let mut row_ptr = Vec::with_capacity(self.nrows + 1);
        let mut col_idx = Vec::with_capacity(self.nnz());
        let mut values = Vec::with_capacity(self.nnz());
        row_ptr.push(0);
        for &old in p.forward_map() {
            let (cols, vals) = self.row(old);
            col_idx.extend_from_slice(cols);
            values.extend_from_slice(vals);
            row_ptr.push(col_idx.len());
        }
        Ok(Self::from_parts(
            self.nrows, self.ncols, row_ptr, col_idx, values,
        ))
    }
}

/// First difference found between two matrices under canonical comparison.
#[derive(Clone, Debug, PartialEq)]
pub enum Mismatch {
    Shape {
        expected: (usize, usize),
        got: (usize, usize),
    },
    /// Entry present in exactly one of the two matrices.
    Pattern {
        row: usize,
        col: usize,
        in_expected: bool,
    },
    Value {
        row: usize,
        col: usize,
        expected: f64,
        got: f64,
    },
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::Shape { expected, got } => write!(
                f,
                "shape {}x{} != expected {}x{}",
                got.0, got.1, expected.0, expected.1
            ),
            Mismatch::Pattern {
                row,
                col,
                in_expected,
            } => {
                let side = if *in_expected { "missing from result" } else { "unexpected in result" };
                write!(f, "entry ({row}, {col}) {side}")
            }
            Mismatch::Value {
                row,
                col,
                expected,
                got,
            } => write!(f, "entry ({row}, {col}): expected {expected}, got {got}"),
        }
    }
}

/// Locates the first (row-major) disagreement between `expected` and `got`.
pub fn first_mismatch(expected: &CsrMatrix, got: &CsrMatrix, tol: f64) -> Option<Mismatch> {
    if (expected.nrows, expected.ncols) != (got.nrows, got.ncols) {
        return Some(Mismatch::Shape {
            expected: (expected.nrows, expected.ncols),
            got: (got.nrows, got.ncols),
        });
    }
    for i in 0..expected.nrows {
        let (ec, ev) = expected.row(i);
        let (gc, gv) = got.row(i);
        let (mut p, mut q) = (0, 0);
        while p < ec.len() || q < gc.len() {
            match (ec.get(p), gc.get(q)) {
                (Some(&a), Some(&b)) if a == b => {
                    // written so that NaN counts as a mismatch
                    let close = (ev[p] - gv[q]).abs() <= tol;
                    if !close {
                        return Some(Mismatch::Value {
                            row: i,
                            col: a,
                            expected: ev[p],
                            got: gv[q],
                        });
                    }
                    p += 1;
                    q += 1;
                }
                (Some(&a), Some(&b)) => {
                    let in_expected = a < b;
                    return Some(Mismatch::Pattern {
                        row: i,
                        col: a.min(b),
                        in_expected,
                    });
                }
                (Some(&a), None) => {
                    return Some(Mismatch::Pattern {
                        row: i,
                        col: a,
                        in_expected: true,
                    })
                }
                (None, Some(&b)) => {
                    return Some(Mismatch::Pattern {
                        row: i,
                        col: b,
                        in_expected: false,
                    })
                }
                (None, None) => unreachable!(),
            }
        }
    }
    None
}

/// Same shape, same sparsity pattern, values within absolute `tol`.
pub fn csr_equal_canonical(a: &CsrMatrix, b: &CsrMatrix, tol: f64) -> bool {
    first_mismatch(a, b, tol).is_none()
}
