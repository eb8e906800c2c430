#![allow(dead_code)]

use std::path::{Path, PathBuf};

use clusterwise_spgemm::sparse::{write_matrix_market, CooMatrix, CsrMatrix};
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

/// Square matrix of `groups` blocks of `k` identical rows. Group `g` draws
/// its columns from `g*k .. (g+1)*k`, so groups never share a column.
pub fn identical_groups(rng: &mut impl Rng, groups: usize, k: usize, shuffle: bool) -> CsrMatrix {
    let n = groups * k;
    let mut order: Vec<usize> = (0..n).collect();
    if shuffle {
        order.shuffle(rng);
    }
    let mut coo = CooMatrix::new(n, n);
    for g in 0..groups {
        let mut cols: Vec<usize> = (0..k).filter(|_| rng.random_bool(0.6)).map(|c| g * k + c).collect();
        if cols.is_empty() {
            cols.push(g * k);
        }
        for m in 0..k {
            for &c in &cols {
                coo.push(order[g * k + m], c, rng.random_range(0.5..1.5)).unwrap();
            }
        }
    }
    CsrMatrix::from_coo(&coo)
}

pub fn write_mtx(dir: &Path, name: &str, m: &CsrMatrix) -> PathBuf {
    let path = dir.join(name);
    let f = std::fs::File::create(&path).unwrap();
    write_matrix_market(std::io::BufWriter::new(f), m).unwrap();
    path
}

pub fn to_dense(a: &CsrMatrix) -> Vec<Vec<f64>> {
    let mut d = vec![vec![0.0; a.ncols()]; a.nrows()];
    for (i, j, v) in a.iter() {
        d[i][j] = v;
    }
    d
}

/// Dense triple loop; the second result marks positions reached by a term.
pub fn dense_product(a: &CsrMatrix, b: &CsrMatrix) -> (Vec<Vec<f64>>, Vec<Vec<bool>>) {
    let (da, db) = (to_dense(a), to_dense(b));
    let mut c = vec![vec![0.0; b.ncols()]; a.nrows()];
    let mut p = vec![vec![false; b.ncols()]; a.nrows()];
    for (i, k, _) in a.iter() {
        for (kk, j, _) in b.iter() {
            if kk == k {
                c[i][j] += da[i][k] * db[k][j];
                p[i][j] = true;
            }
        }
    }
    (c, p)
}

pub fn matches_dense(c: &CsrMatrix, dense: &(Vec<Vec<f64>>, Vec<Vec<bool>>), tol: f64) -> bool {
    let (vals, present) = dense;
    if c.nrows() != vals.len() || vals.first().is_some_and(|r| r.len() != c.ncols()) {
        return false;
    }
    for i in 0..c.nrows() {
        for j in 0..c.ncols() {
            match c.get(i, j) {
                Some(v) if !present[i][j] || (v - vals[i][j]).abs() > tol => return false,
                None if present[i][j] => return false,
                _ => {}
            }
        }
    }
    true
}
