//! Exact recoverability: decoders, the ℓ₀ oracle, balancedness certificates
//! and planted-recovery experiments.

mod balance;
mod decode;
mod experiment;

pub use balance::{
    counterexample_from_witness, max_certified_k, strict_k_balanced, support_balance,
    support_balance_all_signs, support_balance_mu, BalancednessReport, LevelCheck, Partition,
    SupportBalance, SupportMu, MAX_SUPPORT, SUPPORT_LIMIT,
};
pub use decode::{
    basis_pursuit, decode_planted, l0_oracle, recovered, RecoveryResult, SparsestSolutions,
    L0_ENUMERATION_LIMIT,
};
pub use experiment::{
    planted_vectors, recovery_experiment, ExperimentMode, ExperimentOutcome,
    EXHAUSTIVE_SUPPORT_LIMIT,
};

/// A support is certified when `μ(S) < 1/2 − BALANCE_STRICTNESS`.
pub const BALANCE_STRICTNESS: f64 = 1e-9;
/// Relative componentwise tolerance for declaring a planted vector recovered.
pub const RECOVERY_TOL: f64 = 1e-6;

/// `C(n, k)`, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}
