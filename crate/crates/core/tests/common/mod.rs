#![allow(dead_code)]

use clusterwise_spgemm::format::ClusterAssignment;
use clusterwise_spgemm::sparse::{CooMatrix, CsrMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random matrix with each position present with probability `density`.
pub fn random_csr(rng: &mut impl Rng, nrows: usize, ncols: usize, density: f64) -> CsrMatrix {
    let mut coo = CooMatrix::new(nrows, ncols);
    for i in 0..nrows {
        for j in 0..ncols {
            if rng.random_bool(density) {
                coo.push(i, j, rng.random_range(0.1..2.0)).unwrap();
            }
        }
    }
    CsrMatrix::from_coo(&coo)
}

pub fn to_dense(a: &CsrMatrix) -> Vec<Vec<f64>> {
    let mut d = vec![vec![0.0; a.ncols()]; a.nrows()];
    for (i, j, v) in a.iter() {
        d[i][j] = v;
    }
    d
}

/// Dense triple loop; `present` marks positions reached by any product term.
pub fn dense_product(a: &CsrMatrix, b: &CsrMatrix) -> (Vec<Vec<f64>>, Vec<Vec<bool>>) {
    let (da, db) = (to_dense(a), to_dense(b));
    let pa: Vec<Vec<bool>> = (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|k| a.get(i, k).is_some()).collect())
        .collect();
    let pb: Vec<Vec<bool>> = (0..b.nrows())
        .map(|i| (0..b.ncols()).map(|k| b.get(i, k).is_some()).collect())
        .collect();
    let mut c = vec![vec![0.0; b.ncols()]; a.nrows()];
    let mut p = vec![vec![false; b.ncols()]; a.nrows()];
    for i in 0..a.nrows() {
        for j in 0..b.ncols() {
            for k in 0..a.ncols() {
                if pa[i][k] && pb[k][j] {
                    c[i][j] += da[i][k] * db[k][j];
                    p[i][j] = true;
                }
            }
        }
    }
    (c, p)
}

/// Compares a CSR product with the dense oracle: same structure, values within `tol`.
pub fn matches_dense(c: &CsrMatrix, dense: &(Vec<Vec<f64>>, Vec<Vec<bool>>), tol: f64) -> bool {
    let (vals, present) = dense;
    if c.nrows() != vals.len() {
        return false;
    }
    for i in 0..c.nrows() {
        for j in 0..c.ncols() {
            match c.get(i, j) {
                Some(v) => {
                    if !present[i][j] || (v - vals[i][j]).abs() > tol {
                        return false;
                    }
                }
                None => {
                    if present[i][j] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Random partition of `0..n` into clusters of at most `max` rows.
pub fn random_partition(rng: &mut impl Rng, n: usize, max: usize) -> ClusterAssignment {
    let mut rows: Vec<usize> = (0..n).collect();
    rows.shuffle(rng);
    let mut clusters = Vec::new();
    let mut rest = &rows[..];
    while !rest.is_empty() {
        let k = rng.random_range(1..=max.min(rest.len()));
        let mut c = rest[..k].to_vec();
        c.sort_unstable();
        clusters.push(c);
        rest = &rest[k..];
    }
    ClusterAssignment::new(n, clusters).unwrap()
}

/// `groups` blocks of `k` identical rows over disjoint column ranges,
/// optionally shuffled.
pub fn grouped_rows(rng: &mut impl Rng, groups: usize, k: usize, width: usize, shuffle: bool) -> CsrMatrix {
    let n = groups * k;
    let mut order: Vec<usize> = (0..n).collect();
    if shuffle {
        order.shuffle(rng);
    }
    let ncols = groups * width;
    let mut coo = CooMatrix::new(n, ncols.max(n));
    for g in 0..groups {
        let cols: Vec<usize> = (0..width)
            .filter(|_| rng.random_bool(0.6))
            .map(|c| g * width + c)
            .collect();
        let cols = if cols.is_empty() { vec![g * width] } else { cols };
        for m in 0..k {
            let row = order[g * k + m];
            for &c in &cols {
                coo.push(row, c, rng.random_range(0.5..1.5)).unwrap();
            }
        }
    }
    CsrMatrix::from_coo(&coo)
}
