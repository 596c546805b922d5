//! Browser bindings for the certificate pipeline.
//!
//! Every export takes a JSON matrix spec and returns a JSON string. The plain
//! `*_json` functions hold the logic so they can be tested off the browser.

use serde::{Deserialize, Serialize};
use spcert_core::cert::{max_certified_k, recovery_experiment, ExperimentMode};
use spcert_core::coherence::{coherence, is_dictionary, normalize_columns, DICTIONARY_TOL};
use spcert_core::gen::{gen_gaussian, gen_id_hadamard};
use spcert_core::width::gamma_width;
use spcert_core::{null_space_basis, DenseMatrix, DEFAULT_RANK_TOL};
use wasm_bindgen::prelude::*;

/// Largest `n` accepted from the page; keeps a single-threaded tab responsive.
const MAX_COLUMNS: usize = 24;

#[derive(Debug, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum MatrixSpec {
    Gaussian {
        m: usize,
        n: usize,
        seed: u64,
        #[serde(default)]
        normalize: bool,
    },
    Hadamard {
        m: usize,
    },
    Matrix {
        rows: usize,
        cols: usize,
        data: Vec<f64>,
    },
}

impl MatrixSpec {
    pub fn build(&self) -> Result<DenseMatrix, String> {
        let a = match self {
            MatrixSpec::Gaussian {
                m,
                n,
                seed,
                normalize,
            } => gen_gaussian(*m, *n, *seed, *normalize),
            MatrixSpec::Hadamard { m } => gen_id_hadamard(*m),
            MatrixSpec::Matrix { rows, cols, data } => DenseMatrix::new(*rows, *cols, data.clone()),
        }
        .map_err(|e| e.to_string())?;
        if a.cols() > MAX_COLUMNS {
            return Err(format!("at most {MAX_COLUMNS} columns in the demo"));
        }
        Ok(a)
    }
}

fn parse(spec: &str) -> Result<DenseMatrix, String> {
    serde_json::from_str::<MatrixSpec>(spec)
        .map_err(|e| format!("bad matrix spec: {e}"))?
        .build()
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct Analysis {
    pub m: usize,
    pub n: usize,
    pub gamma: f64,
    pub k1: usize,
    pub best_face: usize,
    pub witness_v: Vec<f64>,
    pub per_face_values: Vec<Option<f64>>,
    /// Coherence of the column-normalized matrix; `null` with a zero column.
    #[serde(rename = "M")]
    pub coherence: Option<f64>,
    pub k2: Option<usize>,
    pub is_dictionary: bool,
}

/// Width, coherence and both sparsity bounds.
pub fn analyze_json(spec: &str) -> Result<String, String> {
    let a = parse(spec)?;
    let basis = null_space_basis(&a, DEFAULT_RANK_TOL).map_err(|e| e.to_string())?;
    let width = gamma_width(&basis).map_err(|e| e.to_string())?;
    let coh = normalize_columns(&a).and_then(|d| coherence(&d)).ok();
    to_json(&Analysis {
        m: a.rows(),
        n: a.cols(),
        gamma: width.gamma,
        k1: width.k1,
        best_face: width.best_face,
        witness_v: width.witness_v,
        per_face_values: width
            .per_face_values
            .iter()
            .map(|v| v.is_finite().then_some(*v))
            .collect(),
        coherence: coh.as_ref().map(|c| c.coherence),
        k2: coh.map(|c| c.k2),
        is_dictionary: is_dictionary(&a, DICTIONARY_TOL),
    })
}

#[derive(Debug, Serialize)]
pub struct CurvePoint {
    pub k: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
}

/// Basis-pursuit success rate for random `k`-sparse vectors, `k = 1..=m`.
pub fn recovery_curve_json(spec: &str, trials: usize, seed: u64) -> Result<String, String> {
    let a = parse(spec)?;
    if trials == 0 || trials > 500 {
        return Err("trials must be between 1 and 500".into());
    }
    let curve = (1..=a.rows())
        .map(|k| {
            recovery_experiment(&a, k, ExperimentMode::Random, trials, seed)
                .map(|o| CurvePoint {
                    k,
                    trials: o.trials,
                    successes: o.successes,
                    success_rate: o.success_rate,
                })
                .map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    to_json(&curve)
}

#[derive(Debug, Serialize)]
pub struct BalanceLevel {
    pub k: usize,
    pub max_mu: f64,
    pub supports: usize,
}

#[derive(Debug, Serialize)]
pub struct BalanceProfile {
    pub k_star: usize,
    pub k_cap: usize,
    pub failure_found: bool,
    pub worst_support: Option<Vec<usize>>,
    pub levels: Vec<BalanceLevel>,
}

/// Largest `μ(S)` per support size up to the first failing level.
pub fn balance_profile_json(spec: &str, k_cap: usize) -> Result<String, String> {
    let a = parse(spec)?;
    let basis = null_space_basis(&a, DEFAULT_RANK_TOL).map_err(|e| e.to_string())?;
    let k_cap = k_cap.clamp(1, a.cols() - 1);
    let rep = max_certified_k(&basis, k_cap).map_err(|e| e.to_string())?;
    let mut levels: Vec<BalanceLevel> = Vec::new();
    for s in &rep.mu_by_support {
        let k = s.support.len();
        match levels.last_mut() {
            Some(level) if level.k == k => {
                level.max_mu = level.max_mu.max(s.mu);
                level.supports += 1;
            }
            _ => levels.push(BalanceLevel {
                k,
                max_mu: s.mu,
                supports: 1,
            }),
        }
    }
    to_json(&BalanceProfile {
        k_star: rep.k_star,
        k_cap: rep.k_cap,
        failure_found: rep.failure_found,
        worst_support: rep.worst_partition.map(|p| p.support),
        levels,
    })
}

#[wasm_bindgen]
pub fn analyze(spec: &str) -> Result<String, JsError> {
    analyze_json(spec).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = recoveryCurve)]
pub fn recovery_curve(spec: &str, trials: usize, seed: u32) -> Result<String, JsError> {
    recovery_curve_json(spec, trials, seed as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = balanceProfile)]
pub fn balance_profile(spec: &str, k_cap: usize) -> Result<String, JsError> {
    balance_profile_json(spec, k_cap).map_err(|e| JsError::new(&e))
}
