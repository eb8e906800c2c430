use rayon::prelude::*;

use super::spgemm::{check_inner_dims, jaccard_from_counts, row_upper_bound};
use super::HashAccumulator;
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// A pair of distinct rows with their Jaccard similarity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CandidatePair {
    pub i: usize,
    pub j: usize,
    pub score: f64,
}

/// Per-row top-k neighbours by Jaccard similarity, computed from the overlap
/// counts of `a * a_t` one output row at a time. Row `i` of the result holds
/// pairs `(i, j, score)` with `j != i` and `score >= jacc_th`, best first,
/// ties broken by smaller `j`, at most `topk` of them.
///
/// `a_t` must be the transpose of `a`. Stored values are ignored: overlaps
/// are counted structurally, as if both operands were binarized.
pub fn spgemm_topk_rows(
    a: &CsrMatrix,
    a_t: &CsrMatrix,
    topk: usize,
    jacc_th: f64,
) -> Result<Vec<Vec<CandidatePair>>> {
    check_inner_dims(a, a_t)?;
    if a_t.ncols() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "a_t is {}x{}, expected transpose of {}x{}",
            a_t.nrows(),
            a_t.ncols(),
            a.nrows(),
            a.ncols()
        )));
    }
    if topk == 0 {
        return Err(Error::InvalidArgument("topk must be at least 1".into()));
    }

    Ok((0..a.nrows())
        .into_par_iter()
        .map_init(HashAccumulator::new, |acc, i| {
            acc.prepare(row_upper_bound(a, a_t, i));
            for &k in a.row_cols(i) {
                for &j in a_t.row_cols(k) {
                    acc.accumulate(j, 1.0);
                }
            }
            let ni = a.row_nnz(i);
            let mut row: Vec<CandidatePair> = acc
                .entries()
                .filter(|&(j, _)| j != i)
                .filter_map(|(j, overlap)| {
                    let score = jaccard_from_counts(overlap as usize, ni, a.row_nnz(j));
                    (score >= jacc_th).then_some(CandidatePair { i, j, score })
                })
                .collect();
            acc.clear();
            row.sort_unstable_by(|x, y| y.score.total_cmp(&x.score).then(x.j.cmp(&y.j)));
            row.truncate(topk);
            row
        })
        .collect())
}

/// Candidate row pairs for hierarchical clustering: the union of every row's
/// top-k neighbours, as unordered pairs with `i < j`, sorted by `(i, j)`.
pub fn spgemm_topk(
    a: &CsrMatrix,
    a_t: &CsrMatrix,
    topk: usize,
    jacc_th: f64,
) -> Result<Vec<CandidatePair>> {
    let mut pairs: Vec<CandidatePair> = spgemm_topk_rows(a, a_t, topk, jacc_th)?
        .into_iter()
        .flatten()
        .map(|p| CandidatePair {
            i: p.i.min(p.j),
            j: p.i.max(p.j),
            score: p.score,
        })
        .collect();
    pairs.sort_unstable_by_key(|p| (p.i, p.j));
    pairs.dedup_by_key(|p| (p.i, p.j));
    Ok(pairs)
}
