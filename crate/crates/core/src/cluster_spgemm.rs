//! Cluster-wise SpGEMM: `C = A * B` with `A` in clustered form.
//!
//! For each cluster the kernel walks the merged column list once. Every B row
//! it touches is streamed a single time and applied to all member rows that
//! have an entry in that column, so the row stays hot across the cluster.
//! Member row `l` accumulates into its own hash table. `C` keeps `A`'s
//! cluster partition and row order.

use rayon::prelude::*;

use crate::error::Result;
use crate::format::{ClusterView, CsrClusterMatrix};
use crate::rowwise::{check_inner_dims_clustered, HashAccumulator};
use crate::sparse::CsrMatrix;

/// Memory-access proxies for one multiplication.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AccessStats {
    /// B-row fetches: one per (work unit, touched B row).
    pub b_row_loads: u64,
    /// Inner-loop slot visits, placeholders included.
    pub a_inner_iters: u64,
    /// Inner-loop visits that landed on a placeholder and were skipped.
    pub placeholder_skips: u64,
}

/// What the inner loop does with placeholder slots of `A`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PlaceholderMode {
    /// Skip slots whose validity bit is clear.
    #[default]
    Skip,
    /// Multiply the stored 0.0 like any other value. Only useful to check
    /// that placeholders do not change valid outputs.
    Multiply,
}

/// Access counts for row-wise SpGEMM on `a * b`.
pub fn rowwise_access_stats(a: &CsrMatrix, b: &CsrMatrix) -> AccessStats {
    AccessStats {
        b_row_loads: a.nnz() as u64,
        a_inner_iters: a.col_idx().iter().map(|&k| b.row_nnz(k) as u64).sum(),
        placeholder_skips: 0,
    }
}

/// Access counts for cluster-wise SpGEMM on `a * b`.
pub fn clusterwise_access_stats(a: &CsrClusterMatrix, b: &CsrMatrix) -> AccessStats {
    let mut stats = AccessStats::default();
    for v in a.views() {
        let k = v.size() as u64;
        stats.b_row_loads += v.cols.len() as u64;
        for (p, &col) in v.cols.iter().enumerate() {
            let nb = b.row_nnz(col) as u64;
            let missing = (0..v.size()).filter(|&l| !v.is_valid(p, l)).count() as u64;
            stats.a_inner_iters += k * nb;
            stats.placeholder_skips += missing * nb;
        }
    }
    stats
}

pub fn spgemm_clusterwise(a: &CsrClusterMatrix, b: &CsrMatrix) -> Result<CsrClusterMatrix> {
    spgemm_clusterwise_with(a, b, PlaceholderMode::Skip)
}

pub fn spgemm_clusterwise_instrumented(
    a: &CsrClusterMatrix,
    b: &CsrMatrix,
) -> Result<(CsrClusterMatrix, AccessStats)> {
    let c = spgemm_clusterwise(a, b)?;
    Ok((c, clusterwise_access_stats(a, b)))
}

fn cluster_bound(v: &ClusterView<'_>, b: &CsrMatrix) -> usize {
    v.cols.iter().map(|&k| b.row_nnz(k)).sum()
}

fn symbolic_cluster(acc: &mut HashAccumulator, v: &ClusterView<'_>, b: &CsrMatrix) -> usize {
    acc.prepare(cluster_bound(v, b));
    for &k in v.cols {
        for &j in b.row_cols(k) {
            acc.insert_key(j);
        }
    }
    let n = acc.len();
    acc.clear();
    n
}

struct ClusterOut<'a> {
    cols: &'a mut [usize],
    values: &'a mut [f64],
    valid: &'a mut [u8],
}

fn split_clusters<'a>(
    col_ptr: &[usize],
    value_ptr: &[usize],
    mut cols: &'a mut [usize],
    mut values: &'a mut [f64],
    mut valid: &'a mut [u8],
) -> Vec<ClusterOut<'a>> {
    let mut out = Vec::with_capacity(col_ptr.len().saturating_sub(1));
    for (cw, vw) in col_ptr.windows(2).zip(value_ptr.windows(2)) {
        let (c, rest) = std::mem::take(&mut cols).split_at_mut(cw[1] - cw[0]);
        cols = rest;
        let (v, rest) = std::mem::take(&mut values).split_at_mut(vw[1] - vw[0]);
        values = rest;
        let (m, rest) = std::mem::take(&mut valid).split_at_mut(vw[1] - vw[0]);
        valid = rest;
        out.push(ClusterOut {
            cols: c,
            values: v,
            valid: m,
        });
    }
    out
}

#[derive(Default)]
struct Workspace {
    accs: Vec<HashAccumulator>,
    bounds: Vec<usize>,
    active: Vec<usize>,
    keys: Vec<usize>,
}

fn numeric_cluster(
    ws: &mut Workspace,
    v: &ClusterView<'_>,
    b: &CsrMatrix,
    mode: PlaceholderMode,
    out: ClusterOut<'_>,
) {
    let k = v.size();
    if ws.accs.len() < k {
        ws.accs.resize_with(k, HashAccumulator::new);
    }
    ws.bounds.clear();
    ws.bounds.resize(k, 0);
    for (p, &col) in v.cols.iter().enumerate() {
        let nb = b.row_nnz(col);
        for l in 0..k {
            if mode == PlaceholderMode::Multiply || v.is_valid(p, l) {
                ws.bounds[l] += nb;
            }
        }
    }
    for l in 0..k {
        ws.accs[l].prepare(ws.bounds[l]);
    }

    for (p, &col) in v.cols.iter().enumerate() {
        ws.active.clear();
        ws.active
            .extend((0..k).filter(|&l| mode == PlaceholderMode::Multiply || v.is_valid(p, l)));
        let a_vals = v.column_values(p);
        let (b_cols, b_vals) = b.row(col);
        for (&j, &b_kj) in b_cols.iter().zip(b_vals) {
            for &l in &ws.active {
                ws.accs[l].accumulate(j, a_vals[l] * b_kj);
            }
        }
    }

    ws.keys.clear();
    for acc in &ws.accs[..k] {
        ws.keys.extend(acc.keys());
    }
    ws.keys.sort_unstable();
    ws.keys.dedup();
    debug_assert_eq!(ws.keys.len(), out.cols.len());
    out.cols.copy_from_slice(&ws.keys);

    for l in 0..k {
        let mut p = 0;
        let merged = &*out.cols;
        let (values, valid) = (&mut *out.values, &mut *out.valid);
        ws.accs[l].drain_sorted(|j, val| {
            while merged[p] != j {
                p += 1;
            }
            values[p * k + l] = val;
            valid[p * k + l] = 1;
        });
    }
}

fn pack_bits(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .enumerate()
        .fold(0u64, |w, (i, &b)| w | (u64::from(b) << i))
}

/// Cluster-wise SpGEMM with an explicit placeholder policy.
///
/// A symbolic pass sizes each output cluster from the union of the B rows it
/// touches, then a numeric pass fills the clusters in parallel.
pub fn spgemm_clusterwise_with(
    a: &CsrClusterMatrix,
    b: &CsrMatrix,
    mode: PlaceholderMode,
) -> Result<CsrClusterMatrix> {
    check_inner_dims_clustered(a, b)?;
    let views = a.views();

    let counts: Vec<usize> = views
        .par_iter()
        .map_init(HashAccumulator::new, |acc, v| symbolic_cluster(acc, v, b))
        .collect();
    let mut col_ptr = Vec::with_capacity(views.len() + 1);
    let mut value_ptr = Vec::with_capacity(views.len() + 1);
    col_ptr.push(0);
    value_ptr.push(0);
    for (v, &n) in views.iter().zip(&counts) {
        col_ptr.push(col_ptr.last().unwrap() + n);
        value_ptr.push(value_ptr.last().unwrap() + n * v.size());
    }
    let nslots = *value_ptr.last().unwrap();
    let mut col_idx = vec![0usize; *col_ptr.last().unwrap()];
    let mut values = vec![0.0f64; nslots];
    let mut valid_bytes = vec![0u8; nslots];

    split_clusters(&col_ptr, &value_ptr, &mut col_idx, &mut values, &mut valid_bytes)
        .into_par_iter()
        .zip(views.par_iter())
        .for_each_init(Workspace::default, |ws, (out, v)| {
            numeric_cluster(ws, v, b, mode, out)
        });

    let valid: Vec<u64> = valid_bytes.par_chunks(64).map(pack_bits).collect();

    Ok(CsrClusterMatrix::from_parts(
        a.nrows(),
        b.ncols(),
        a.cluster_sizes().to_vec(),
        col_ptr,
        col_idx,
        value_ptr,
        values,
        valid,
        a.row_map().to_vec(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{build_csr_cluster, cluster_to_csr, ClusterAssignment};
    use crate::rowwise::spgemm_rowwise;
    use crate::sparse::CooMatrix;

    fn from_rows(ncols: usize, rows: &[&[usize]]) -> CsrMatrix {
        let mut coo = CooMatrix::new(rows.len(), ncols);
        for (i, r) in rows.iter().enumerate() {
            for &c in r.iter() {
                coo.push(i, c, (1 + i + 2 * c) as f64).unwrap();
            }
        }
        CsrMatrix::from_coo(&coo)
    }

    #[test]
    fn singleton_clusters_match_rowwise_bitwise() {
        let a = from_rows(4, &[&[0, 2], &[1], &[], &[0, 1, 3]]);
        let b = from_rows(3, &[&[0, 1], &[2], &[0, 2], &[1]]);
        let m = build_csr_cluster(&a, &ClusterAssignment::singletons(4)).unwrap();
        let c = spgemm_clusterwise(&m, &b).unwrap();
        assert_eq!(cluster_to_csr(&c), spgemm_rowwise(&a, &b).unwrap());
        assert_eq!(c.placeholder_count(), 0);
    }

    #[test]
    fn identity_reproduces_b_rows() {
        let b = from_rows(5, &[&[0, 4], &[1, 2], &[3], &[], &[0, 1, 2, 3]]);
        let asg = ClusterAssignment::new(5, vec![vec![0, 3], vec![1, 2, 4]]).unwrap();
        let m = build_csr_cluster(&CsrMatrix::identity(5), &asg).unwrap();
        let c = spgemm_clusterwise(&m, &b).unwrap();
        assert_eq!(c.cluster_sizes(), m.cluster_sizes());
        assert_eq!(c.row_map(), m.row_map());
        assert_eq!(cluster_to_csr(&c), b);
    }

    #[test]
    fn shared_column_loads_b_row_once() {
        let a = from_rows(2, &[&[0], &[0], &[0]]);
        let b = from_rows(3, &[&[0, 2], &[1]]);
        let m = build_csr_cluster(&a, &ClusterAssignment::new(3, vec![vec![0, 1, 2]]).unwrap())
            .unwrap();
        let (c, stats) = spgemm_clusterwise_instrumented(&m, &b).unwrap();
        assert_eq!(stats.b_row_loads, 1);
        assert_eq!(stats.a_inner_iters, 6);
        assert_eq!(rowwise_access_stats(&a, &b).b_row_loads, 3);
        assert_eq!(cluster_to_csr(&c), spgemm_rowwise(&a, &b).unwrap());
    }

    #[test]
    fn placeholders_are_skipped_and_counted() {
        let a = from_rows(3, &[&[0, 2], &[0]]);
        let b = from_rows(2, &[&[0], &[1], &[1]]);
        let m = build_csr_cluster(&a, &ClusterAssignment::new(2, vec![vec![0, 1]]).unwrap())
            .unwrap();
        let stats = clusterwise_access_stats(&m, &b);
        assert_eq!(stats.b_row_loads, 2);
        assert_eq!(stats.a_inner_iters, 4);
        assert_eq!(stats.placeholder_skips, 1);

        let c = spgemm_clusterwise(&m, &b).unwrap();
        // row 1 never reaches column 1
        assert_eq!(cluster_to_csr(&c), spgemm_rowwise(&a, &b).unwrap());
        assert_eq!(c.placeholder_count(), 1);

        let loose = spgemm_clusterwise_with(&m, &b, PlaceholderMode::Multiply).unwrap();
        assert_eq!(loose.placeholder_count(), 0);
        assert_eq!(cluster_to_csr(&loose).get(1, 1), Some(0.0));
    }

    #[test]
    fn dimension_mismatch() {
        let m = build_csr_cluster(&CsrMatrix::identity(3), &ClusterAssignment::singletons(3))
            .unwrap();
        assert!(spgemm_clusterwise(&m, &CsrMatrix::identity(4)).is_err());
    }
}
