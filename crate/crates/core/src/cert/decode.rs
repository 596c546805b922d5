use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::encode;
use crate::error::{Error, Result};
use crate::linalg::{l1_linf, least_squares, norm2, DenseMatrix};
use crate::lp::{self, LpStatus};

use super::{binomial, RECOVERY_TOL};

/// Support-enumeration limit for [`l0_oracle`].
pub const L0_ENUMERATION_LIMIT: u128 = 1_000_000;

/// ℓ₁ minimization `min ‖x‖₁ s.t. Ax = y`.
pub fn basis_pursuit(a: &DenseMatrix, y: &[f64]) -> Result<Vec<f64>> {
    if y.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{} measurements for {} rows",
            y.len(),
            a.rows()
        )));
    }
    let sol = lp::solve(&encode::basis_pursuit_lp(a, y)?)?;
    match sol.status {
        LpStatus::Optimal => {
            let (point, _) = sol.optimum()?;
            Ok(point[..a.cols()].to_vec())
        }
        LpStatus::Infeasible => Err(Error::LpInfeasible),
        LpStatus::Unbounded => Err(Error::LpUnbounded),
    }
}

/// Outcome of decoding one planted vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryResult {
    pub planted: Vec<f64>,
    pub decoded: Vec<f64>,
    pub success: bool,
    pub l1_planted: f64,
    pub l1_decoded: f64,
}

impl RecoveryResult {
    pub fn new(planted: Vec<f64>, decoded: Vec<f64>) -> Self {
        let success = recovered(&planted, &decoded);
        let l1_planted = l1_linf(&planted).0;
        let l1_decoded = l1_linf(&decoded).0;
        Self {
            planted,
            decoded,
            success,
            l1_planted,
            l1_decoded,
        }
    }
}

/// `max|decoded − planted| ≤ 1e-6 · max(1, max|planted|)`.
pub fn recovered(planted: &[f64], decoded: &[f64]) -> bool {
    let scale = l1_linf(planted).1.max(1.0);
    planted.len() == decoded.len()
        && planted
            .iter()
            .zip(decoded)
            .all(|(p, d)| (p - d).abs() <= RECOVERY_TOL * scale)
}

/// Plants `planted`, measures it with `a` and decodes with basis pursuit.
pub fn decode_planted(a: &DenseMatrix, planted: Vec<f64>) -> Result<RecoveryResult> {
    let y = a.mul_vec(&planted)?;
    let decoded = basis_pursuit(a, &y)?;
    Ok(RecoveryResult::new(planted, decoded))
}

/// Sparsest solutions of `Ax = y` found by exhaustive support enumeration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparsestSolutions {
    /// Size of the sparsest support, `None` if nothing up to `k_max` fits.
    pub sparsity: Option<usize>,
    /// `(support, full-length solution)` pairs at that size.
    pub solutions: Vec<(Vec<usize>, Vec<f64>)>,
}

impl SparsestSolutions {
    pub fn unique(&self) -> Option<&[f64]> {
        match self.solutions.as_slice() {
            [(_, x)] => Some(x),
            _ => None,
        }
    }
}

/// Enumerates supports of size `0..=k_max` in increasing size and keeps every
/// exact restricted least-squares fit at the first size that has one.
pub fn l0_oracle(a: &DenseMatrix, y: &[f64], k_max: usize) -> Result<SparsestSolutions> {
    let (m, n) = a.shape();
    if y.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{} measurements for {} rows",
            y.len(),
            m
        )));
    }
    if k_max > m {
        return Err(Error::BadDimensions(format!(
            "k_max = {k_max} exceeds m = {m}"
        )));
    }
    let count = binomial(n, k_max);
    if count > L0_ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "supports",
            count,
            limit: L0_ENUMERATION_LIMIT,
        });
    }
    let tol = 1e-8 * norm2(y).max(1.0);
    for k in 0..=k_max {
        let mut solutions = Vec::new();
        for support in (0..n).combinations(k) {
            let sub = a.select_columns(&support);
            let Some(xs) = least_squares(&sub, y)? else {
                continue;
            };
            let fit = sub.mul_vec(&xs)?;
            let residual = norm2(&fit.iter().zip(y).map(|(f, t)| f - t).collect::<Vec<_>>());
            if residual <= tol {
                let mut x = vec![0.0; n];
                for (&j, v) in support.iter().zip(xs) {
                    x[j] = v;
                }
                solutions.push((support, x));
            }
        }
        if !solutions.is_empty() {
            return Ok(SparsestSolutions {
                sparsity: Some(k),
                solutions,
            });
        }
    }
    Ok(SparsestSolutions {
        sparsity: None,
        solutions: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::gen_id_hadamard;

    fn e(n: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        v
    }

    #[test]
    fn zero_measurement_decodes_to_zero() {
        let a = gen_id_hadamard(4).unwrap();
        let x = basis_pursuit(&a, &[0.0; 4]).unwrap();
        assert!(x.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn hadamard_one_sparse_recovers() {
        let a = gen_id_hadamard(4).unwrap();
        let res = decode_planted(&a, e(8, 0)).unwrap();
        assert!(res.success);
        for (d, p) in res.decoded.iter().zip(&res.planted) {
            assert!((d - p).abs() <= 1e-7);
        }
    }

    #[test]
    fn ones_row_has_ties() {
        let a = DenseMatrix::from_rows(&[[1.0, 1.0, 1.0]]).unwrap();
        let x = basis_pursuit(&a, &[1.0]).unwrap();
        assert!((l1_linf(&x).0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn basis_pursuit_out_of_range() {
        let a = DenseMatrix::from_rows(&[[1.0, 1.0, 0.0], [2.0, 2.0, 0.0]]).unwrap();
        assert_eq!(basis_pursuit(&a, &[1.0, 0.0]), Err(Error::LpInfeasible));
        assert!(basis_pursuit(&a, &[1.0]).is_err());
    }

    #[test]
    fn l0_zero_measurement() {
        let a = gen_id_hadamard(4).unwrap();
        let sol = l0_oracle(&a, &[0.0; 4], 2).unwrap();
        assert_eq!(sol.sparsity, Some(0));
        assert_eq!(sol.unique(), Some(&[0.0; 8][..]));
    }

    #[test]
    fn l0_ones_row_is_not_unique() {
        let a = DenseMatrix::from_rows(&[[1.0, 1.0, 1.0]]).unwrap();
        let sol = l0_oracle(&a, &[1.0], 1).unwrap();
        assert_eq!(sol.sparsity, Some(1));
        let xs: Vec<Vec<f64>> = sol.solutions.iter().map(|(_, x)| x.clone()).collect();
        assert_eq!(xs, vec![e(3, 0), e(3, 1), e(3, 2)]);
        assert!(sol.unique().is_none());
    }

    #[test]
    fn l0_hadamard_unique() {
        let a = gen_id_hadamard(4).unwrap();
        let y = a.mul_vec(&e(8, 4)).unwrap();
        let sol = l0_oracle(&a, &y, 1).unwrap();
        let x = sol.unique().expect("unique 1-sparse solution");
        for (u, v) in x.iter().zip(e(8, 4)) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn l0_guards() {
        let a = DenseMatrix::from_rows(&[[1.0, 1.0, 1.0]]).unwrap();
        assert!(matches!(
            l0_oracle(&a, &[1.0], 2),
            Err(Error::BadDimensions(_))
        ));
        let wide = DenseMatrix::zeros(12, 60);
        assert!(matches!(
            l0_oracle(&wide, &[0.0; 12], 12),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn recovered_uses_relative_tolerance() {
        assert!(recovered(&[10.0, 0.0], &[10.0 + 5e-6, 0.0]));
        assert!(!recovered(&[1.0, 0.0], &[1.0 + 5e-6, 0.0]));
    }
}
