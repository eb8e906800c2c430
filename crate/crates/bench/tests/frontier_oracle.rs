mod common;

use std::collections::VecDeque;

use clusterwise_bench::frontier::{generate_frontiers, pick_sources};
use clusterwise_spgemm::sparse::CsrMatrix;
use common::{random_csr, rng};
use rand::Rng;

/// Depth of every vertex from `src` by a plain queue-based BFS.
fn bfs_depths(a: &CsrMatrix, src: usize) -> Vec<Option<usize>> {
    let mut depth = vec![None; a.nrows()];
    depth[src] = Some(0);
    let mut q = VecDeque::from([src]);
    while let Some(v) = q.pop_front() {
        for &w in a.row_cols(v) {
            if depth[w].is_none() {
                depth[w] = Some(depth[v].unwrap() + 1);
                q.push_back(w);
            }
        }
    }
    depth
}

#[test]
fn frontiers_match_per_source_bfs() {
    let mut r = rng(7);
    for case in 0..60 {
        let n = r.random_range(1..80);
        let density = r.random_range(0.0..0.08);
        let a = random_csr(&mut r, n, n, density);
        let batch = r.random_range(1..100);
        let limit = r.random_range(1..12);
        let seed = r.random();
        let f = generate_frontiers(&a, limit, batch, seed).unwrap();
        let sources = pick_sources(n, batch, seed);
        let depths: Vec<_> = sources.iter().map(|&s| bfs_depths(&a, s)).collect();
        let max_depth = depths
            .iter()
            .flat_map(|d| d.iter().flatten())
            .copied()
            .max()
            .unwrap();
        assert_eq!(f.len(), (max_depth + 1).min(limit), "case {case}");
        for (t, m) in f.iter().enumerate() {
            assert_eq!((m.nrows(), m.ncols()), (n, sources.len()));
            assert!(m.values().iter().all(|&v| v == 1.0));
            for (s, d) in depths.iter().enumerate() {
                for (v, dv) in d.iter().enumerate() {
                    assert_eq!(m.get(v, s).is_some(), *dv == Some(t), "case {case} t {t} s {s} v {v}");
                }
            }
        }
    }
}

#[test]
fn sources_are_distinct_and_seeded() {
    for seed in 0..20 {
        let s = pick_sources(500, 64, seed);
        assert_eq!(s, pick_sources(500, 64, seed));
        let mut u = s.clone();
        u.sort_unstable();
        u.dedup();
        assert_eq!(u.len(), 64);
        assert!(u.iter().all(|&v| v < 500));
    }
    assert_ne!(pick_sources(500, 64, 1), pick_sources(500, 64, 2));
}

#[test]
fn rejects_bad_inputs() {
    assert!(generate_frontiers(&CsrMatrix::zeros(3, 4), 10, 2, 0).is_err());
    assert!(generate_frontiers(&CsrMatrix::identity(3), 10, 0, 0).is_err());
}
