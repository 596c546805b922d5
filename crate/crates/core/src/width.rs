//! The γ₁,∞-width of a measurement matrix and the sparsity bound it implies.
//!
//! For a null-space basis `N`, the width is the minimum of `‖v‖₁ / ‖v‖∞` over
//! nonzero `v = Nx`. The set `‖Nx‖∞ = 1` splits into the faces
//! `±F_i = {x : [Nx]_i = ±1, |[Nx]_j| ≤ 1}`, each convex, so the width is the
//! smallest of n face LPs (the negative faces mirror the positive ones).
//! [`gamma_reciprocal`] computes the same number from the dual viewpoint,
//! maximizing `‖Nx‖∞` over the ℓ₁ unit ball.

use serde::{Deserialize, Serialize};

use crate::encode;
use crate::error::{Error, Result};
use crate::linalg::{l1_linf, NullSpaceBasis};
use crate::lp::{self, LpStatus};
use crate::{par_map, BOUND_STRICTNESS};

/// Rows of `N` at or below this magnitude are treated as identically zero.
const ZERO_ROW_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WidthReport {
    pub gamma: f64,
    /// 0-based index of the face attaining the minimum.
    pub best_face: usize,
    pub minimizer_x: Vec<f64>,
    /// `N · minimizer_x`; has `witness_v[best_face] = 1` and `‖witness_v‖∞ = 1`.
    pub witness_v: Vec<f64>,
    /// Face minima; empty faces are `+∞` (serialized as `null`).
    pub per_face_values: Vec<f64>,
    pub k1: usize,
}

/// Minimum of `‖Nx‖₁` over one face, with its minimizer.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceMin {
    pub value: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
}

/// `min ‖Nx‖₁` over `F_face`.
pub fn face_min(basis: &NullSpaceBasis, face: usize) -> Result<FaceMin> {
    face_min_signed(basis, face, 1.0)
}

/// Face minimum with `[Nx]_face = sign` (`sign` is `1.0` or `-1.0`).
pub fn face_min_signed(basis: &NullSpaceBasis, face: usize, sign: f64) -> Result<FaceMin> {
    if face >= basis.n() {
        return Err(Error::DimensionMismatch(format!(
            "face {face} out of range for n = {}",
            basis.n()
        )));
    }
    let row = basis.matrix().row(face);
    if row.iter().all(|v| v.abs() <= ZERO_ROW_TOL) {
        return Err(Error::FaceInfeasible(face));
    }
    let prob = encode::face_lp(basis, face, sign)?;
    let sol = lp::solve(&prob)?;
    match sol.status {
        LpStatus::Infeasible => return Err(Error::FaceInfeasible(face)),
        // Σt ≥ 0 on every face
        LpStatus::Unbounded => {
            return Err(Error::NumericalBreakdown(format!(
                "face {face} reported unbounded"
            )))
        }
        LpStatus::Optimal => {}
    }
    let (point, value) = sol.optimum()?;
    let x = point[..basis.p()].to_vec();
    let v = basis.combine(&x);
    Ok(FaceMin { value, x, v })
}

/// γ₁,∞ from the n positive face LPs.
pub fn gamma_width(basis: &NullSpaceBasis) -> Result<WidthReport> {
    let faces: Vec<usize> = (0..basis.n()).collect();
    let results = par_map(&faces, |&i| match face_min(basis, i) {
        Ok(f) => Ok(Some(f)),
        Err(Error::FaceInfeasible(_)) => Ok(None),
        Err(e) => Err(e),
    });

    let mut per_face_values = Vec::with_capacity(basis.n());
    let mut best: Option<(usize, FaceMin)> = None;
    for (i, res) in results.into_iter().enumerate() {
        match res? {
            None => per_face_values.push(f64::INFINITY),
            Some(f) => {
                per_face_values.push(f.value);
                if best.as_ref().is_none_or(|(_, b)| f.value < b.value) {
                    best = Some((i, f));
                }
            }
        }
    }
    let (best_face, face) = best.ok_or(Error::AllFacesInfeasible)?;
    Ok(WidthReport {
        gamma: face.value,
        best_face,
        minimizer_x: face.x,
        witness_v: face.v,
        per_face_values,
        k1: sparsity_bound_k1(face.value),
    })
}

/// γ₁,∞ as `1 / max_i max{[Nx]_i : ‖Nx‖₁ ≤ 1}`.
pub fn gamma_reciprocal(basis: &NullSpaceBasis) -> Result<f64> {
    let faces: Vec<usize> = (0..basis.n()).collect();
    let maxima = par_map(&faces, |&i| -> Result<f64> {
        let cost: Vec<f64> = basis.matrix().row(i).iter().map(|v| -v).collect();
        let sol = lp::solve(&encode::l1_ball_lp(basis, &cost)?)?;
        let (_, value) = sol.optimum()?;
        Ok(-value)
    });
    let mut best = 0.0f64;
    for m in maxima {
        best = best.max(m?);
    }
    if !(best > 0.0) {
        return Err(Error::AllFacesInfeasible);
    }
    Ok(1.0 / best)
}

/// Largest `k` with `k < γ/2`, strictness enforced with a `1e-9` margin.
pub fn sparsity_bound_k1(gamma: f64) -> usize {
    ((0.5 * gamma - BOUND_STRICTNESS).ceil() - 1.0).max(0.0) as usize
}

/// `‖v‖₁ / ‖v‖∞` of a nonzero vector.
pub fn width_ratio(v: &[f64]) -> f64 {
    let (l1, linf) = l1_linf(v);
    l1 / linf
}
