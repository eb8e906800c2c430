mod common;

use clusterwise_spgemm::cluster_spgemm::{
    clusterwise_access_stats, rowwise_access_stats, spgemm_clusterwise,
    spgemm_clusterwise_instrumented, spgemm_clusterwise_with, PlaceholderMode,
};
use clusterwise_spgemm::clustering::{
    fixed_length_clusters, hierarchical_clusters, variable_length_clusters, ClusterParams,
};
use clusterwise_spgemm::format::{build_csr_cluster, cluster_to_csr, ClusterAssignment};
use clusterwise_spgemm::rowwise::spgemm_rowwise;
use clusterwise_spgemm::sparse::{csr_equal_canonical, CsrMatrix};
use common::{grouped_rows, random_csr, random_partition, rng};
use rand::Rng;

fn strategies(a: &CsrMatrix) -> Vec<ClusterAssignment> {
    let p = ClusterParams::default();
    vec![
        fixed_length_clusters(a.nrows(), 1).unwrap(),
        fixed_length_clusters(a.nrows(), 4).unwrap(),
        variable_length_clusters(a, &p).unwrap(),
        hierarchical_clusters(a, &p).unwrap(),
    ]
}

#[test]
fn hierarchical_on_random_matches_rowwise() {
    let mut r = rng(30);
    let a = random_csr(&mut r, 60, 60, 0.1);
    let b = random_csr(&mut r, 60, 45, 0.1);
    let asg = hierarchical_clusters(&a, &ClusterParams::default()).unwrap();
    let c = spgemm_clusterwise(&build_csr_cluster(&a, &asg).unwrap(), &b).unwrap();
    assert!(csr_equal_canonical(&cluster_to_csr(&c), &spgemm_rowwise(&a, &b).unwrap(), 1e-9));
}

#[test]
fn every_strategy_matches_rowwise_and_keeps_structure() {
    let mut r = rng(31);
    for _ in 0..60 {
        let n = r.random_range(1..=80);
        let d = r.random_range(0.01..0.3);
        let a = random_csr(&mut r, n, n, d);
        let ncols = r.random_range(1..40);
        let b = random_csr(&mut r, n, ncols, d);
        let reference = spgemm_rowwise(&a, &b).unwrap();
        let mut asgs = strategies(&a);
        asgs.push(random_partition(&mut r, n, 8));
        for asg in asgs {
            let ac = build_csr_cluster(&a, &asg).unwrap();
            let (c, stats) = spgemm_clusterwise_instrumented(&ac, &b).unwrap();
            assert_eq!(c.cluster_sizes(), ac.cluster_sizes());
            assert_eq!(c.row_map(), ac.row_map());
            // nonnegative inputs: exact structural equality, values to rounding
            assert!(csr_equal_canonical(&cluster_to_csr(&c), &reference, 1e-9));
            let row = rowwise_access_stats(&a, &b);
            assert!(stats.b_row_loads <= row.b_row_loads);
            assert_eq!(row.b_row_loads, a.nnz() as u64);
            assert!(stats.placeholder_skips <= stats.a_inner_iters);
            assert_eq!(stats.a_inner_iters - stats.placeholder_skips, row.a_inner_iters);
        }
    }
}

#[test]
fn loads_equal_nnz_iff_no_overlap_in_clusters() {
    let mut r = rng(32);
    for _ in 0..100 {
        let n = r.random_range(1..40);
        let a = random_csr(&mut r, n, 30, 0.08);
        let asg = random_partition(&mut r, n, 6);
        let ac = build_csr_cluster(&a, &asg).unwrap();
        let loads = clusterwise_access_stats(&ac, &a.transpose()).b_row_loads;
        let overlap_free = asg.clusters().iter().all(|c| {
            let total: usize = c.iter().map(|&i| a.row_nnz(i)).sum();
            let mut cols: Vec<usize> = c.iter().flat_map(|&i| a.row_cols(i).to_vec()).collect();
            cols.sort_unstable();
            cols.dedup();
            cols.len() == total
        });
        assert_eq!(loads == a.nnz() as u64, overlap_free);
    }
}

#[test]
fn identical_groups_load_each_b_row_once_per_group() {
    let mut r = rng(33);
    for k in 1..=8 {
        let a = grouped_rows(&mut r, 7, k, 5, true);
        let asg = hierarchical_clusters(&a, &ClusterParams::default()).unwrap();
        let ac = build_csr_cluster(&a, &asg).unwrap();
        let stats = clusterwise_access_stats(&ac, &a.transpose());
        assert_eq!(stats.b_row_loads as usize * k, a.nnz());
    }
}

#[test]
fn placeholders_do_not_change_valid_outputs() {
    let mut r = rng(34);
    for _ in 0..40 {
        let n = r.random_range(1..60);
        let a = random_csr(&mut r, n, n, 0.1);
        let b = random_csr(&mut r, n, 30, 0.1);
        let ac = build_csr_cluster(&a, &fixed_length_clusters(n, 4).unwrap()).unwrap();
        let strict = cluster_to_csr(&spgemm_clusterwise(&ac, &b).unwrap());
        let loose = cluster_to_csr(&spgemm_clusterwise_with(&ac, &b, PlaceholderMode::Multiply).unwrap());
        for (i, j, v) in strict.iter() {
            assert_eq!(loose.get(i, j), Some(v));
        }
        // extra entries only ever come from placeholder products and are zero
        for (i, j, v) in loose.iter() {
            if strict.get(i, j).is_none() {
                assert_eq!(v, 0.0);
            }
        }
    }
}

#[test]
fn worker_count_independent() {
    let mut r = rng(35);
    let a = random_csr(&mut r, 100, 100, 0.05);
    let ac = build_csr_cluster(&a, &hierarchical_clusters(&a, &ClusterParams::default()).unwrap())
        .unwrap();
    let results: Vec<_> = [1, 2, 4, 8]
        .iter()
        .map(|&t| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .unwrap()
                .install(|| spgemm_clusterwise(&ac, &a).unwrap())
        })
        .collect();
    for c in &results[1..] {
        assert_eq!(c, &results[0]);
    }
}
