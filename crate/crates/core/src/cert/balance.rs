//! Exact strict k-balancedness of the null space.
//!
//! For a support `S`, `μ(S) = max{‖v_S‖₁ : v ∈ range(N), ‖v‖₁ ≤ 1}`. The null
//! space is strictly k-balanced iff `μ(S) < 1/2` for every `|S| = k`, which is
//! exactly the condition for every k-sparse vector to be the unique solution
//! of both the ℓ₀ and ℓ₁ problems. `μ(S)` is the largest of `2^{|S|-1}` LPs,
//! one per sign pattern on `S` with the first sign fixed to `+1`.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::encode;
use crate::error::{Error, Result};
use crate::linalg::{l1_linf, NullSpaceBasis};
use crate::lp;
use crate::par_map;

use super::decode::{basis_pursuit, RecoveryResult};
use super::{binomial, BALANCE_STRICTNESS};

/// Largest support handled by [`support_balance`] (2¹⁹ sign patterns).
pub const MAX_SUPPORT: usize = 20;
/// Supports enumerated per level by [`strict_k_balanced`].
pub const SUPPORT_LIMIT: u128 = 100_000;

/// A split of `0..n` into a support and its zero set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub n: usize,
    pub support: Vec<usize>,
    pub zeros: Vec<usize>,
}

impl Partition {
    /// Builds a partition from any list of distinct indices below `n`.
    pub fn new(n: usize, support: &[usize]) -> Result<Self> {
        let mut s = support.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.len() != support.len() || s.last().is_some_and(|&i| i >= n) {
            return Err(Error::BadDimensions(format!(
                "support {support:?} is not a set of distinct indices below {n}"
            )));
        }
        let zeros = (0..n).filter(|i| s.binary_search(i).is_err()).collect();
        Ok(Self {
            n,
            support: s,
            zeros,
        })
    }

    pub fn size(&self) -> usize {
        self.support.len()
    }

    /// `v` restricted to the support, zero elsewhere.
    pub fn restrict(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for &i in &self.support {
            out[i] = v[i];
        }
        out
    }
}

/// `μ(S)` with a maximizing null-space vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportBalance {
    pub mu: f64,
    /// `v = Nx` with `‖v‖₁ ≤ 1` and `‖v_S‖₁ = μ`.
    pub witness_v: Vec<f64>,
}

fn sign_patterns(size: usize, fix_first: bool) -> impl Iterator<Item = Vec<f64>> {
    let free = if fix_first {
        size.saturating_sub(1)
    } else {
        size
    };
    (0u64..1 << free).map(move |bits| {
        (0..size)
            .map(|pos| {
                let bit = if fix_first {
                    if pos == 0 {
                        return 1.0;
                    }
                    pos - 1
                } else {
                    pos
                };
                if bits >> bit & 1 == 0 {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect()
    })
}

fn balance_over_signs(
    basis: &NullSpaceBasis,
    part: &Partition,
    fix_first: bool,
) -> Result<SupportBalance> {
    if part.n != basis.n() {
        return Err(Error::DimensionMismatch(format!(
            "partition of {} indices for n = {}",
            part.n,
            basis.n()
        )));
    }
    let k = part.size();
    if k == 0 {
        return Err(Error::BadDimensions("support must be nonempty".into()));
    }
    if k > MAX_SUPPORT {
        return Err(Error::TooLarge {
            what: "support size",
            count: k as u128,
            limit: MAX_SUPPORT as u128,
        });
    }
    let nmat = basis.matrix();
    let mut best: Option<SupportBalance> = None;
    for signs in sign_patterns(k, fix_first) {
        let mut cost = vec![0.0; basis.p()];
        for (&i, s) in part.support.iter().zip(&signs) {
            for (c, v) in cost.iter_mut().zip(nmat.row(i)) {
                *c -= s * v;
            }
        }
        let sol = lp::solve(&encode::l1_ball_lp(basis, &cost)?)?;
        let (point, value) = sol.optimum()?;
        let mu = -value;
        if best.as_ref().is_none_or(|b| mu > b.mu) {
            best = Some(SupportBalance {
                mu,
                witness_v: basis.combine(&point[..basis.p()]),
            });
        }
    }
    Ok(best.expect("at least one sign pattern"))
}

/// `μ(S)` and its witness, enumerating sign patterns with the first sign fixed.
pub fn support_balance(basis: &NullSpaceBasis, part: &Partition) -> Result<SupportBalance> {
    balance_over_signs(basis, part, true)
}

/// `μ(S)` over all `2^{|S|}` sign patterns; equals [`support_balance`] by `v ↦ −v`.
pub fn support_balance_all_signs(
    basis: &NullSpaceBasis,
    part: &Partition,
) -> Result<SupportBalance> {
    balance_over_signs(basis, part, false)
}

pub fn support_balance_mu(basis: &NullSpaceBasis, part: &Partition) -> Result<f64> {
    support_balance(basis, part).map(|b| b.mu)
}

/// `μ` for one tested support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportMu {
    pub support: Vec<usize>,
    pub mu: f64,
}

/// Result of checking one sparsity level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelCheck {
    pub k: usize,
    pub holds: bool,
    pub worst: Partition,
    pub worst_mu: f64,
    pub worst_witness: Vec<f64>,
    pub mu_by_support: Vec<SupportMu>,
}

/// Checks `μ(S) < 1/2 − 1e-9` for every support of size `k`.
///
/// Supports are enumerated lexicographically; the worst one is the first
/// attaining the largest `μ`.
pub fn strict_k_balanced(basis: &NullSpaceBasis, k: usize) -> Result<LevelCheck> {
    let n = basis.n();
    if k == 0 || k >= n {
        return Err(Error::BadDimensions(format!(
            "need 1 ≤ k ≤ n − 1, got k = {k}, n = {n}"
        )));
    }
    let count = binomial(n, k);
    if count > SUPPORT_LIMIT {
        return Err(Error::TooLarge {
            what: "supports",
            count,
            limit: SUPPORT_LIMIT,
        });
    }
    let supports: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let balances = par_map(&supports, |s| {
        let part = Partition::new(n, s)?;
        support_balance(basis, &part)
    });

    let mut mu_by_support = Vec::with_capacity(supports.len());
    let mut worst: Option<(usize, SupportBalance)> = None;
    for (idx, bal) in balances.into_iter().enumerate() {
        let bal = bal?;
        mu_by_support.push(SupportMu {
            support: supports[idx].clone(),
            mu: bal.mu,
        });
        if worst.as_ref().is_none_or(|(_, w)| bal.mu > w.mu) {
            worst = Some((idx, bal));
        }
    }
    let (idx, bal) = worst.expect("at least one support");
    Ok(LevelCheck {
        k,
        holds: bal.mu < 0.5 - BALANCE_STRICTNESS,
        worst: Partition::new(n, &supports[idx])?,
        worst_mu: bal.mu,
        worst_witness: bal.witness_v,
        mu_by_support,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalancednessReport {
    /// Largest certified `k ≤ k_cap`; 0 when `k = 1` already fails.
    pub k_star: usize,
    pub k_cap: usize,
    /// True when some level up to `k_cap` failed, i.e. `k_star < k_cap`.
    pub failure_found: bool,
    /// Worst support at `k_star + 1` when a failure was found, otherwise at `k_cap`.
    pub worst_partition: Option<Partition>,
    pub worst_mu: f64,
    pub worst_witness: Vec<f64>,
    pub mu_by_support: Vec<SupportMu>,
    /// `1/2 − max μ` at level `k_star` (`1/2` when `k_star = 0`).
    pub strict_margin: f64,
}

/// Largest `k ≤ k_cap` for which the null space is strictly k-balanced.
///
/// Levels are checked in increasing order and the scan stops at the first
/// failure; strict balancedness is monotone in `k`.
pub fn max_certified_k(basis: &NullSpaceBasis, k_cap: usize) -> Result<BalancednessReport> {
    let n = basis.n();
    if k_cap >= n {
        return Err(Error::BadDimensions(format!(
            "k_cap = {k_cap} must be below n = {n}"
        )));
    }
    let mut report = BalancednessReport {
        k_star: 0,
        k_cap,
        failure_found: false,
        worst_partition: None,
        worst_mu: 0.0,
        worst_witness: vec![0.0; n],
        mu_by_support: Vec::new(),
        strict_margin: 0.5,
    };
    for k in 1..=k_cap {
        let level = strict_k_balanced(basis, k)?;
        report.mu_by_support.extend(level.mu_by_support);
        report.worst_partition = Some(level.worst);
        report.worst_mu = level.worst_mu;
        report.worst_witness = level.worst_witness;
        if !level.holds {
            report.failure_found = true;
            return Ok(report);
        }
        report.k_star = k;
        report.strict_margin = 0.5 - level.worst_mu;
    }
    Ok(report)
}

/// Builds a sparse vector that basis pursuit fails to recover uniquely.
///
/// With `v` maximizing `‖v_S‖₁` over the null-space ℓ₁ ball, the planted
/// vector is `v_S` and `−v_Z` is a competing solution of the same system with
/// `‖v_Z‖₁ ≤ ‖v_S‖₁`. If the decoder happens to return the planted vector on
/// an exact tie, the competing minimizer is reported as the decoded point.
pub fn counterexample_from_witness(
    basis: &NullSpaceBasis,
    worst: &Partition,
    worst_mu: f64,
) -> Result<RecoveryResult> {
    if worst_mu < 0.5 - BALANCE_STRICTNESS {
        return Err(Error::WitnessUnavailable(format!(
            "μ = {worst_mu} is strictly below 1/2; the support is recoverable"
        )));
    }
    let bal = support_balance(basis, worst)?;
    if bal.mu < 0.5 - BALANCE_STRICTNESS {
        return Err(Error::WitnessUnavailable(format!(
            "recomputed μ = {} disagrees with the claimed {worst_mu}",
            bal.mu
        )));
    }
    let planted = worst.restrict(&bal.witness_v);
    if l1_linf(&planted).1 == 0.0 {
        return Err(Error::WitnessUnavailable(
            "witness vanishes on the support".into(),
        ));
    }
    let a = basis.source();
    let y = a.mul_vec(&planted)?;
    let decoded = basis_pursuit(a, &y)?;
    let mut result = RecoveryResult::new(planted, decoded);

    if result.success {
        let competitor: Vec<f64> = result
            .planted
            .iter()
            .zip(&bal.witness_v)
            .map(|(p, v)| p - v)
            .collect();
        let l1_comp = l1_linf(&competitor).0;
        if l1_comp > result.l1_decoded + lp::CONTRACT_TOL {
            return Err(Error::Internal(format!(
                "competitor ℓ₁ {l1_comp} exceeds decoded ℓ₁ {}",
                result.l1_decoded
            )));
        }
        result = RecoveryResult::new(result.planted, competitor);
    }
    Ok(result)
}
