//! Sparse-recovery certificates for a fixed measurement matrix `A`.
//!
//! Three certified sparsity levels are computed from the null space of `A`:
//!
//! - `k₁` from the γ₁,∞-width ([`width`]): recovery holds whenever `k < γ/2`.
//! - `k₂` from the mutual coherence `M` of a dictionary ([`coherence`]):
//!   recovery holds whenever `k < (1 + 1/M)/2`. For dictionaries
//!   `1 + 1/M ≤ γ`, so `k₂ ≤ k₁`.
//! - `k*`, the exact threshold, from strict k-balancedness of the null space
//!   ([`cert`]), checked by enumeration on small instances.
//!
//! Every bound is cross-checked by basis pursuit and an exhaustive ℓ₀ oracle.
//! All linear programs go through the dense simplex in [`lp`].

pub mod cert;
pub mod coherence;
mod encode;
pub mod error;
pub mod gen;
pub mod linalg;
pub mod lp;
pub mod width;

pub use error::{Error, Result};
pub use linalg::{null_space_basis, DenseMatrix, NullSpaceBasis, DEFAULT_RANK_TOL};

/// Margin used to enforce the strict inequalities behind `k₁` and `k₂`.
pub const BOUND_STRICTNESS: f64 = 1e-9;

/// Order-preserving map, parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub(crate) fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}
