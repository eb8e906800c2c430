use crate::error::{Error, Result};

/// Sparse matrix as a list of `(row, col, value)` triplets.
///
/// Duplicates are allowed until [`CooMatrix::canonicalize`] (or conversion to
/// CSR) sums them.
#[derive(Clone, Debug, PartialEq)]
pub struct CooMatrix {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl CooMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        CooMatrix {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn from_entries(
        nrows: usize,
        ncols: usize,
        entries: Vec<(usize, usize, f64)>,
    ) -> Result<Self> {
        if let Some(&(r, c, _)) = entries.iter().find(|&&(r, c, _)| r >= nrows || c >= ncols) {
            return Err(Error::DimensionMismatch(format!(
                "entry ({r}, {c}) outside {nrows}x{ncols}"
            )));
        }
        Ok(CooMatrix {
            nrows,
            ncols,
            entries,
        })
    }

    pub fn push(&mut self, row: usize, col: usize, value: f64) -> Result<()> {
        if row >= self.nrows || col >= self.ncols {
            return Err(Error::DimensionMismatch(format!(
                "entry ({row}, {col}) outside {}x{}",
                self.nrows, self.ncols
            )));
        }
        self.entries.push((row, col, value));
        Ok(())
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sorts entries by `(row, col)` and sums duplicates.
    pub fn canonicalize(&mut self) {
        self.entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut out: Vec<(usize, usize, f64)> = Vec::with_capacity(self.entries.len());
        for &(r, c, v) in &self.entries {
            match out.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => out.push((r, c, v)),
            }
        }
        self.entries = out;
    }

    pub fn is_canonical(&self) -> bool {
        self.entries
            .windows(2)
            .all(|w| (w[0].0, w[0].1) < (w[1].0, w[1].1))
    }
}
