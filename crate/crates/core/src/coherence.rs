//! Dictionaries, mutual coherence and the coherence sparsity bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm2, DenseMatrix, DEFAULT_RANK_TOL};
use crate::width::{gamma_width, sparsity_bound_k1};
use crate::{linalg, BOUND_STRICTNESS};

/// Column-norm tolerance for [`is_dictionary`].
pub const DICTIONARY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    /// Largest absolute inner product between distinct columns.
    #[serde(rename = "M")]
    pub coherence: f64,
    /// 0-based column pair `(i, j)`, `i < j`, attaining the maximum.
    pub argmax_pair: (usize, usize),
    pub k2: usize,
    pub is_dictionary: bool,
}

/// True iff every column has Euclidean norm within `tol` of one.
pub fn is_dictionary(a: &DenseMatrix, tol: f64) -> bool {
    first_non_unit_column(a, tol).is_none()
}

fn first_non_unit_column(a: &DenseMatrix, tol: f64) -> Option<(usize, f64)> {
    (0..a.cols())
        .map(|j| (j, norm2(&a.column(j))))
        .find(|&(_, nrm)| (nrm - 1.0).abs() > tol)
}

/// Scales each column to unit Euclidean norm.
pub fn normalize_columns(a: &DenseMatrix) -> Result<DenseMatrix> {
    let mut out = a.clone();
    for j in 0..a.cols() {
        let nrm = norm2(&a.column(j));
        if nrm == 0.0 {
            return Err(Error::ZeroColumn(j));
        }
        for i in 0..a.rows() {
            out[(i, j)] /= nrm;
        }
    }
    Ok(out)
}

/// Mutual coherence of a dictionary with more columns than rows.
///
/// Ties keep the lexicographically first pair.
pub fn coherence(a: &DenseMatrix) -> Result<CoherenceReport> {
    coherence_with_tol(a, DICTIONARY_TOL)
}

pub fn coherence_with_tol(a: &DenseMatrix, tol: f64) -> Result<CoherenceReport> {
    let (m, n) = a.shape();
    if m >= n {
        return Err(Error::NotUnderdetermined { rows: m, cols: n });
    }
    if let Some((column, norm)) = first_non_unit_column(a, tol) {
        return Err(Error::NotADictionary { column, norm });
    }
    let cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut best = (0usize, 1usize, -1.0f64);
    for i in 0..n {
        for j in i + 1..n {
            let g = linalg::dot(&cols[i], &cols[j]).abs();
            if g > best.2 {
                best = (i, j, g);
            }
        }
    }
    let k2 = sparsity_bound_k2(best.2)?;
    Ok(CoherenceReport {
        coherence: best.2,
        argmax_pair: (best.0, best.1),
        k2,
        is_dictionary: true,
    })
}

/// Largest `k` with `k < (1 + 1/M) / 2`, strictness enforced with a `1e-9` margin.
pub fn sparsity_bound_k2(coherence: f64) -> Result<usize> {
    if !(coherence > 0.0) {
        return Err(Error::NonpositiveCoherence(coherence));
    }
    let bound = 0.5 * (1.0 + 1.0 / coherence);
    Ok(((bound - BOUND_STRICTNESS).ceil() - 1.0).max(0.0) as usize)
}

/// Width and coherence bounds side by side for one dictionary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundComparison {
    pub gamma: f64,
    #[serde(rename = "M")]
    pub coherence: f64,
    pub k1: usize,
    pub k2: usize,
    /// `1 + 1/M ≤ γ + tol`.
    pub theorem3_holds: bool,
}

impl BoundComparison {
    pub fn k1_dominates(&self) -> bool {
        self.k1 >= self.k2
    }
}

/// Computes γ₁,∞ and the coherence bound end to end for a full-rank dictionary.
pub fn compare_bounds(a: &DenseMatrix) -> Result<BoundComparison> {
    compare_bounds_with_tol(a, crate::lp::CONTRACT_TOL)
}

pub fn compare_bounds_with_tol(a: &DenseMatrix, tol: f64) -> Result<BoundComparison> {
    let coh = coherence_with_tol(a, tol.max(DICTIONARY_TOL))?;
    let basis = linalg::null_space_basis(a, DEFAULT_RANK_TOL)?;
    let width = gamma_width(&basis)?;
    let cmp = BoundComparison {
        gamma: width.gamma,
        coherence: coh.coherence,
        k1: sparsity_bound_k1(width.gamma),
        k2: coh.k2,
        theorem3_holds: 1.0 + 1.0 / coh.coherence <= width.gamma + tol,
    };
    Ok(cmp)
}
