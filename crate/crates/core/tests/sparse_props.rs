mod common;

use clusterwise_spgemm::sparse::{
    csr_equal_canonical, read_matrix_market, write_matrix_market, CooMatrix, CsrMatrix,
    Permutation,
};
use proptest::prelude::*;

fn coo_strategy(max: usize) -> impl Strategy<Value = CooMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec((0..r, 0..c, -4i32..5), 0..(r * c).min(300)).prop_map(
            move |e| {
                let e = e.into_iter().map(|(i, j, v)| (i, j, v as f64 * 0.5)).collect();
                CooMatrix::from_entries(r, c, e).unwrap()
            },
        )
    })
}

fn csr_strategy(max: usize) -> impl Strategy<Value = CsrMatrix> {
    coo_strategy(max).prop_map(|c| CsrMatrix::from_coo(&c))
}

fn square_with_perm(max: usize) -> impl Strategy<Value = (CsrMatrix, Permutation)> {
    (1..=max).prop_flat_map(|n| {
        (
            prop::collection::vec((0..n, 0..n, 1i32..9), 0..(n * n).min(200)),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_map(move |(e, perm)| {
                let e = e.into_iter().map(|(i, j, v)| (i, j, v as f64)).collect();
                let a = CsrMatrix::from_coo(&CooMatrix::from_entries(n, n, e).unwrap());
                (a, Permutation::new(perm).unwrap())
            })
    })
}

proptest! {
    #[test]
    fn coo_to_csr_matches_dense_accumulation(coo in coo_strategy(100)) {
        let m = CsrMatrix::from_coo(&coo);
        let mut dense = vec![vec![0.0; coo.ncols()]; coo.nrows()];
        let mut present = vec![vec![false; coo.ncols()]; coo.nrows()];
        for &(i, j, v) in coo.entries() {
            dense[i][j] += v;
            present[i][j] = true;
        }
        let mut count = 0;
        for i in 0..coo.nrows() {
            for j in 0..coo.ncols() {
                prop_assert_eq!(m.get(i, j).is_some(), present[i][j]);
                if let Some(v) = m.get(i, j) {
                    prop_assert_eq!(v, dense[i][j]);
                    count += 1;
                }
            }
        }
        prop_assert_eq!(count, m.nnz());
        prop_assert!(CsrMatrix::new(m.nrows(), m.ncols(), m.row_ptr().to_vec(),
            m.col_idx().to_vec(), m.values().to_vec()).is_ok());
    }

    #[test]
    fn canonicalized_coo_agrees(coo in coo_strategy(30)) {
        let mut c = coo.clone();
        c.canonicalize();
        prop_assert!(c.is_canonical());
        prop_assert_eq!(CsrMatrix::from_coo(&c), CsrMatrix::from_coo(&coo));
    }

    #[test]
    fn transpose_is_involution(a in csr_strategy(60)) {
        let t = a.transpose();
        prop_assert_eq!(t.nnz(), a.nnz());
        for (i, j, v) in a.iter() {
            prop_assert_eq!(t.get(j, i), Some(v));
        }
        prop_assert_eq!(t.transpose(), a);
    }

    #[test]
    fn binarize_preserves_structure(a in csr_strategy(40)) {
        let b = a.binarize();
        prop_assert_eq!(b.nnz(), a.nnz());
        prop_assert_eq!(b.col_idx(), a.col_idx());
        prop_assert!(b.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn symmetric_permutation_round_trips((a, p) in square_with_perm(50)) {
        let b = a.permute_symmetric(&p).unwrap();
        prop_assert_eq!(b.nnz(), a.nnz());
        let inv = p.inverse_map();
        for (i, j, v) in a.iter() {
            prop_assert_eq!(b.get(inv[i], inv[j]), Some(v));
        }
        let mut va: Vec<f64> = a.values().to_vec();
        let mut vb: Vec<f64> = b.values().to_vec();
        va.sort_by(f64::total_cmp);
        vb.sort_by(f64::total_cmp);
        prop_assert_eq!(va, vb);
        prop_assert_eq!(b.permute_symmetric(&p.inverse()).unwrap(), a);
    }

    #[test]
    fn row_permutation_round_trips((a, p) in square_with_perm(50)) {
        let b = a.permute_rows(&p).unwrap();
        prop_assert_eq!(b.nnz(), a.nnz());
        for i in 0..a.nrows() {
            prop_assert_eq!(b.row(p.inverse_map()[i]), a.row(i));
        }
        prop_assert_eq!(b.permute_rows(&p.inverse()).unwrap(), a);
    }

    #[test]
    fn matrix_market_round_trip(a in csr_strategy(40)) {
        let mut buf = Vec::new();
        write_matrix_market(&mut buf, &a).unwrap();
        let back = CsrMatrix::from_coo(&read_matrix_market(buf.as_slice()).unwrap());
        prop_assert!(csr_equal_canonical(&a, &back, 0.0));
    }
}

#[test]
fn file_round_trip_with_awkward_values() {
    let coo = CooMatrix::from_entries(
        3,
        4,
        vec![(0, 3, 0.1), (2, 0, 1e-300), (1, 1, -12345.678901234567), (2, 3, 0.0)],
    )
    .unwrap();
    let a = CsrMatrix::from_coo(&coo);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.mtx");
    write_matrix_market(std::fs::File::create(&path).unwrap(), &a).unwrap();
    let back = CsrMatrix::from_coo(&clusterwise_spgemm::sparse::load_matrix_market(&path).unwrap());
    assert_eq!(back, a);
}

#[test]
fn missing_file_is_io_error() {
    let err = clusterwise_spgemm::sparse::load_matrix_market("/nonexistent/x.mtx").unwrap_err();
    assert!(matches!(err, clusterwise_spgemm::Error::Io { .. }));
}
