use proptest::prelude::*;
use spcert_core::gen::{gaussian_matrix, SeededSampler};
use spcert_core::linalg::{l1_linf, qr_decompose, rank};
use spcert_core::{null_space_basis, DenseMatrix, DEFAULT_RANK_TOL};

fn orthonormality_error(q: &DenseMatrix) -> f64 {
    let qtq = q.transpose().matmul(q).unwrap();
    qtq.max_abs_diff(&DenseMatrix::identity(q.cols())).unwrap()
}

/// Rank-`r` product of Gaussian factors.
fn low_rank(rows: usize, cols: usize, r: usize, seed: u64) -> DenseMatrix {
    gaussian_matrix(rows, r, seed)
        .matmul(&gaussian_matrix(r, cols, seed + 1))
        .unwrap()
}

#[test]
fn spec_examples() {
    let a = gaussian_matrix(8, 4, 7);
    let (q, r) = qr_decompose(&a).unwrap();
    assert!(q.matmul(&r).unwrap().max_abs_diff(&a).unwrap() <= 1e-10);

    let a = spcert_core::gen::gen_gaussian(4, 8, 1, false).unwrap();
    let b = null_space_basis(&a, DEFAULT_RANK_TOL).unwrap();
    assert_eq!(b.p(), 4);
    assert!(a.matmul(b.matrix()).unwrap().max_abs() <= 1e-10);
    assert!(orthonormality_error(b.matrix()) <= 1e-10);

    assert_eq!(l1_linf(&[1.0, -1.0, 0.0]), (2.0, 1.0));
    assert_eq!(l1_linf(&[3.0, -4.0]), (7.0, 4.0));
    assert_eq!(l1_linf(&[0.0; 3]), (0.0, 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qr_reconstructs(rows in 1usize..9, cols in 1usize..9, seed in any::<u64>()) {
        let a = gaussian_matrix(rows, cols, seed);
        let (q, r) = qr_decompose(&a).unwrap();
        prop_assert_eq!(q.shape(), (rows, rows));
        prop_assert!(q.matmul(&r).unwrap().max_abs_diff(&a).unwrap() <= 1e-10);
        prop_assert!(orthonormality_error(&q) <= 1e-12);
        for i in 0..rows {
            for j in 0..i.min(cols) {
                prop_assert!(r[(i, j)] == 0.0);
            }
        }
    }

    #[test]
    fn rank_survives_permutations(
        rows in 2usize..7,
        cols in 2usize..7,
        r in 1usize..4,
        seed in any::<u64>(),
    ) {
        let r = r.min(rows).min(cols);
        let a = low_rank(rows, cols, r, seed);
        prop_assert_eq!(rank(&a, DEFAULT_RANK_TOL).unwrap(), r);
        let row_perm: Vec<usize> = (0..rows).rev().collect();
        let col_perm: Vec<usize> = (0..cols).map(|j| (j + 1) % cols).collect();
        let b = a.select_rows(&row_perm).select_columns(&col_perm);
        prop_assert_eq!(rank(&b, DEFAULT_RANK_TOL).unwrap(), r);
        prop_assert_eq!(rank(&a.transpose(), DEFAULT_RANK_TOL).unwrap(), r);
    }

    #[test]
    fn null_space_is_complete(m in 1usize..6, extra in 1usize..5, seed in any::<u64>()) {
        let n = m + extra;
        let a = gaussian_matrix(m, n, seed);
        let b = null_space_basis(&a, DEFAULT_RANK_TOL).unwrap();
        prop_assert_eq!(b.p(), n - m);
        prop_assert!(a.matmul(b.matrix()).unwrap().max_abs() <= 1e-10);
        prop_assert!(orthonormality_error(b.matrix()) <= 1e-10);

        // project random z onto null(A) via Aᵀ-complement: z − Aᵀ(AAᵀ)⁻¹Az,
        // then check it is reproduced by N Nᵀ
        let mut s = SeededSampler::new(seed ^ 0x5eed);
        let at = a.transpose();
        let aat = a.matmul(&at).unwrap();
        let lu = spcert_core::linalg::Lu::factor(&aat).unwrap();
        for _ in 0..100 {
            let z: Vec<f64> = (0..n).map(|_| s.standard_normal()).collect();
            let w = lu.solve(&a.mul_vec(&z).unwrap());
            let atw = at.mul_vec(&w).unwrap();
            let proj: Vec<f64> = z.iter().zip(&atw).map(|(z, u)| z - u).collect();
            let coords = b.matrix().transpose().mul_vec(&proj).unwrap();
            let back = b.combine(&coords);
            let err = back.iter().zip(&proj).fold(0.0f64, |e, (x, y)| e.max((x - y).abs()));
            prop_assert!(err <= 1e-8 * (1.0 + proj.iter().fold(0.0f64, |a, v| a.max(v.abs()))));
        }
    }

    #[test]
    fn l1_linf_bounds(v in prop::collection::vec(-1e6f64..1e6, 1..20)) {
        let (l1, linf) = l1_linf(&v);
        prop_assert!(linf <= l1 + 1e-9);
        prop_assert!(l1 <= v.len() as f64 * linf * (1.0 + 1e-12));
    }
}
