use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen::SeededSampler;
use crate::linalg::DenseMatrix;
use crate::par_map;

use super::binomial;
use super::decode::{decode_planted, RecoveryResult};

/// Support limit for exhaustive experiments.
pub const EXHAUSTIVE_SUPPORT_LIMIT: u128 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentMode {
    /// Every support, every sign pattern, `trials` magnitude draws each.
    Exhaustive,
    /// `trials` random supports with random signs.
    Random,
}

impl FromStr for ExperimentMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Self::Exhaustive),
            "random" => Ok(Self::Random),
            other => Err(Error::Parse {
                location: "mode".into(),
                message: format!("unknown experiment mode {other:?}"),
            }),
        }
    }
}

impl fmt::Display for ExperimentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exhaustive => "exhaustive",
            Self::Random => "random",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    pub k: usize,
    pub mode: ExperimentMode,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// First failing trial in generation order.
    pub first_failure: Option<RecoveryResult>,
}

/// Planted vectors in generation order. Magnitudes are uniform in `[0.5, 1.5]`.
pub fn planted_vectors(
    n: usize,
    k: usize,
    mode: ExperimentMode,
    trials: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    if k > n {
        return Err(Error::BadDimensions(format!(
            "sparsity {k} exceeds n = {n}"
        )));
    }
    let mut sampler = SeededSampler::new(seed);
    let mut out = Vec::new();
    match mode {
        ExperimentMode::Exhaustive => {
            let count = binomial(n, k);
            if count > EXHAUSTIVE_SUPPORT_LIMIT {
                return Err(Error::TooLarge {
                    what: "supports",
                    count,
                    limit: EXHAUSTIVE_SUPPORT_LIMIT,
                });
            }
            for support in (0..n).combinations(k) {
                for bits in 0u64..1 << k {
                    for _ in 0..trials {
                        let mut x = vec![0.0; n];
                        for (pos, &i) in support.iter().enumerate() {
                            let sign = if bits >> pos & 1 == 0 { 1.0 } else { -1.0 };
                            x[i] = sign * sampler.uniform_in(0.5, 1.5);
                        }
                        out.push(x);
                    }
                }
            }
        }
        ExperimentMode::Random => {
            for _ in 0..trials {
                let support = sampler.subset(n, k);
                let mut x = vec![0.0; n];
                for i in support {
                    let sign = sampler.sign();
                    x[i] = sign * sampler.uniform_in(0.5, 1.5);
                }
                out.push(x);
            }
        }
    }
    Ok(out)
}

/// Plants k-sparse vectors, decodes each with basis pursuit and scores exact recovery.
pub fn recovery_experiment(
    a: &DenseMatrix,
    k: usize,
    mode: ExperimentMode,
    trials: usize,
    seed: u64,
) -> Result<ExperimentOutcome> {
    let planted = planted_vectors(a.cols(), k, mode, trials, seed)?;
    let results = par_map(&planted, |x| decode_planted(a, x.clone()));
    let mut successes = 0;
    let mut first_failure = None;
    for res in results {
        let res = res?;
        if res.success {
            successes += 1;
        } else if first_failure.is_none() {
            first_failure = Some(res);
        }
    }
    let total = planted.len();
    Ok(ExperimentOutcome {
        k,
        mode,
        trials: total,
        successes,
        success_rate: if total == 0 {
            1.0
        } else {
            successes as f64 / total as f64
        },
        first_failure,
    })
}
