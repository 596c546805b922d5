use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use spcert_core::cert::max_certified_k;
use spcert_core::coherence::{coherence_with_tol, is_dictionary, CoherenceReport};
use spcert_core::lp::CONTRACT_TOL;
use spcert_core::width::gamma_width;
use spcert_core::{null_space_basis, DenseMatrix, Error, Result, DEFAULT_RANK_TOL};

pub const TOOL_VERSION: &str = concat!("spcert ", env!("CARGO_PKG_VERSION"));

/// Aggregated certificate for one matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub matrix_id: String,
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub gamma: f64,
    pub k1: usize,
    pub best_face: usize,
    pub witness_v: Vec<f64>,
    /// `null` marks an empty face.
    pub per_face_values: Vec<Option<f64>>,
    pub is_dictionary: bool,
    #[serde(rename = "M")]
    pub coherence: Option<f64>,
    pub k2: Option<usize>,
    pub theorem3_holds: Option<bool>,
    pub k_star: Option<usize>,
    pub k_cap: Option<usize>,
    /// Stage name to wall-clock milliseconds.
    pub timings: BTreeMap<String, f64>,
    pub tool_version: String,
}

impl CertReport {
    /// Checks `k₂ ≤ k₁ ≤ k*` wherever the quantities are defined.
    ///
    /// `k*` is a lower bound on the exact threshold when the balancedness scan
    /// stopped at `k_cap` without failing, so `k₁ ≤ k*` is only required
    /// below the cap in that case.
    pub fn check_ordering(&self) -> Result<()> {
        if self.k2.is_some() != self.is_dictionary {
            return Err(Error::Internal(
                "k2 must be present iff the matrix is a dictionary".into(),
            ));
        }
        if let Some(k2) = self.k2 {
            if k2 > self.k1 {
                return Err(Error::Internal(format!(
                    "k2 = {k2} exceeds k1 = {}",
                    self.k1
                )));
            }
        }
        if let (Some(k_star), Some(k_cap)) = (self.k_star, self.k_cap) {
            let capped = k_star == k_cap;
            if self.k1 > k_star && !(capped && self.k1 > k_cap) {
                return Err(Error::Internal(format!(
                    "k1 = {} exceeds k* = {k_star}",
                    self.k1
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    /// Scan strict balancedness up to this sparsity; `None` skips `k*`.
    pub k_cap: Option<usize>,
    /// Contractual tolerance for the dictionary test and the width-vs-coherence check.
    pub tol: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            k_cap: None,
            tol: CONTRACT_TOL,
        }
    }
}

fn timed<T>(timings: &mut BTreeMap<String, f64>, stage: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.insert(stage.to_string(), start.elapsed().as_secs_f64() * 1e3);
    out
}

/// Runs the width, coherence and (optionally) balancedness stages.
pub fn certify(a: &DenseMatrix, matrix_id: &str, opts: &CertifyOptions) -> Result<CertReport> {
    let mut timings = BTreeMap::new();
    let basis = timed(&mut timings, "null_space", || {
        null_space_basis(a, DEFAULT_RANK_TOL)
    })?;
    let width = timed(&mut timings, "width", || gamma_width(&basis))?;

    let dictionary = is_dictionary(a, opts.tol);
    let coh: Option<CoherenceReport> = if dictionary {
        Some(timed(&mut timings, "coherence", || {
            coherence_with_tol(a, opts.tol)
        })?)
    } else {
        None
    };

    let (k_star, k_cap) = match opts.k_cap {
        Some(cap) => {
            let cap = cap.min(a.cols() - 1);
            let rep = timed(&mut timings, "balancedness", || {
                max_certified_k(&basis, cap)
            })?;
            (Some(rep.k_star), Some(cap))
        }
        None => (None, None),
    };

    let report = CertReport {
        matrix_id: matrix_id.to_string(),
        m: a.rows(),
        n: a.cols(),
        p: basis.p(),
        gamma: width.gamma,
        k1: width.k1,
        best_face: width.best_face,
        witness_v: width.witness_v,
        per_face_values: width
            .per_face_values
            .iter()
            .map(|v| v.is_finite().then_some(*v))
            .collect(),
        is_dictionary: dictionary,
        coherence: coh.as_ref().map(|c| c.coherence),
        k2: coh.as_ref().map(|c| c.k2),
        theorem3_holds: coh
            .as_ref()
            .map(|c| 1.0 + 1.0 / c.coherence <= width.gamma + opts.tol),
        k_star,
        k_cap,
        timings,
        tool_version: TOOL_VERSION.to_string(),
    };
    report.check_ordering()?;
    Ok(report)
}
