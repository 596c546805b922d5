//! Seeded matrix generators.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`. Uniforms are `(next_u64() >> 11) * 2⁻⁵³` in `[0, 1)`.
//! Each standard normal uses two consecutive uniforms `u1, u2` and the
//! Box-Muller cosine branch `sqrt(-2 ln(1 - u1)) * cos(2π u2)`. Gaussian matrices
//! are filled row-major. Together these rules pin every generated matrix bit for
//! bit on any IEEE-754 platform with a correctly rounded `ln`, `cos` and `sqrt`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::coherence::normalize_columns;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Deterministic sampler shared by generators and recovery experiments.
#[derive(Clone, Debug)]
pub struct SeededSampler {
    rng: ChaCha8Rng,
}

impl SeededSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn standard_normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    /// `+1.0` or `-1.0` with equal probability.
    pub fn sign(&mut self) -> f64 {
        if self.rng.next_u64() >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Sorted random subset of `0..n` with `k` elements (partial Fisher-Yates).
    pub fn subset(&mut self, n: usize, k: usize) -> Vec<usize> {
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.index(n - i);
            pool.swap(i, j);
        }
        let mut out = pool[..k].to_vec();
        out.sort_unstable();
        out
    }
}

/// `rows×cols` matrix of i.i.d. standard normals, any shape.
pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut sampler = SeededSampler::new(seed);
    let data = (0..rows * cols)
        .map(|_| sampler.standard_normal())
        .collect();
    DenseMatrix::new(rows, cols, data).expect("normals are finite")
}

/// Gaussian measurement matrix with `m < n`, optionally with unit-norm columns.
pub fn gen_gaussian(m: usize, n: usize, seed: u64, normalize: bool) -> Result<DenseMatrix> {
    if m == 0 || m >= n {
        return Err(Error::BadDimensions(format!(
            "need 0 < m < n, got m = {m}, n = {n}"
        )));
    }
    let a = gaussian_matrix(m, n, seed);
    if normalize {
        normalize_columns(&a)
    } else {
        Ok(a)
    }
}

/// Sylvester-Hadamard matrix of order `m` (entries ±1).
pub fn sylvester_hadamard(m: usize) -> Result<DenseMatrix> {
    if m == 0 || !m.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(m));
    }
    let mut h = DenseMatrix::identity(1);
    while h.rows() < m {
        let k = h.rows();
        let mut next = DenseMatrix::zeros(2 * k, 2 * k);
        for i in 0..k {
            for j in 0..k {
                let v = h[(i, j)];
                next[(i, j)] = v;
                next[(i, j + k)] = v;
                next[(i + k, j)] = v;
                next[(i + k, j + k)] = -v;
            }
        }
        h = next;
    }
    Ok(h)
}

/// The `m×2m` dictionary `[I | H/√m]`, coherence `1/√m`.
pub fn gen_id_hadamard(m: usize) -> Result<DenseMatrix> {
    let h = sylvester_hadamard(m)?;
    let scale = 1.0 / (m as f64).sqrt();
    let mut a = DenseMatrix::zeros(m, 2 * m);
    for i in 0..m {
        a[(i, i)] = 1.0;
        for j in 0..m {
            a[(i, m + j)] = h[(i, j)] * scale;
        }
    }
    Ok(a)
}
