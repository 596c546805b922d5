//! Brute-force oracles that share no code with the LP path.
#![allow(dead_code)]

use itertools::Itertools;
use spcert_core::gen::{gaussian_matrix, SeededSampler};
use spcert_core::linalg::qr_decompose;
use spcert_core::lp::{dual_bound, LpProblem, LpSolution};
use spcert_core::{DenseMatrix, NullSpaceBasis};

const PIVOT_TOL: f64 = 1e-9;

/// Unit-ℓ₁ spanning vector of the kernel of a `(p-1)×p` system, if that kernel is one-dimensional.
pub fn kernel_vector(rows: &[Vec<f64>], p: usize) -> Option<Vec<f64>> {
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..p {
        if r == m.len() {
            break;
        }
        let (best, val) = (r..m.len())
            .map(|i| (i, m[i][c].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let scale = m.iter().flatten().fold(1.0f64, |a, v| a.max(v.abs()));
        if val <= PIVOT_TOL * scale {
            continue;
        }
        m.swap(r, best);
        let piv = m[r][c];
        for v in m[r].iter_mut() {
            *v /= piv;
        }
        for i in 0..m.len() {
            if i != r {
                let f = m[i][c];
                if f != 0.0 {
                    for j in 0..p {
                        m[i][j] -= f * m[r][j];
                    }
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    if pivot_cols.len() + 1 != p {
        return None;
    }
    let free = (0..p).find(|c| !pivot_cols.contains(c))?;
    let mut x = vec![0.0; p];
    x[free] = 1.0;
    for (row, &c) in pivot_cols.iter().enumerate() {
        x[c] = -m[row][free];
    }
    Some(x)
}

/// Vertices `v = Nx` of the null-space ℓ₁ ball, up to sign, each with `‖v‖₁ = 1`.
pub fn ball_vertices(basis: &NullSpaceBasis) -> Vec<Vec<f64>> {
    let (n, p) = (basis.n(), basis.p());
    let n_mat = basis.matrix();
    if p == 1 {
        return vec![normalized(basis.combine(&[1.0]))];
    }
    (0..n)
        .combinations(p - 1)
        .filter_map(|zeros| {
            let rows: Vec<Vec<f64>> = zeros.iter().map(|&i| n_mat.row(i).to_vec()).collect();
            kernel_vector(&rows, p).map(|x| normalized(basis.combine(&x)))
        })
        .collect()
}

fn normalized(v: Vec<f64>) -> Vec<f64> {
    let l1: f64 = v.iter().map(|x| x.abs()).sum();
    v.into_iter().map(|x| x / l1).collect()
}

/// γ₁,∞ as `1 / max ‖v‖∞` over ball vertices.
pub fn gamma_oracle(basis: &NullSpaceBasis) -> f64 {
    let best = ball_vertices(basis)
        .iter()
        .map(|v| v.iter().fold(0.0f64, |a, x| a.max(x.abs())))
        .fold(0.0f64, f64::max);
    1.0 / best
}

/// `μ(S)` as the largest `‖v_S‖₁` over ball vertices.
pub fn mu_oracle(basis: &NullSpaceBasis, support: &[usize]) -> f64 {
    ball_vertices(basis)
        .iter()
        .map(|v| support.iter().map(|&i| v[i].abs()).sum::<f64>())
        .fold(0.0f64, f64::max)
}

/// Random `p×p` orthogonal matrix.
pub fn random_orthogonal(p: usize, seed: u64) -> DenseMatrix {
    qr_decompose(&gaussian_matrix(p, p, seed)).unwrap().0
}

/// Random invertible row mixing `G·A`, which leaves `null(A)` unchanged.
pub fn mix_rows(a: &DenseMatrix, seed: u64) -> DenseMatrix {
    let m = a.rows();
    let mut g = gaussian_matrix(m, m, seed);
    for i in 0..m {
        g[(i, i)] += 3.0;
    }
    g.matmul(a).unwrap()
}

pub fn permute_columns(a: &DenseMatrix, perm: &[usize]) -> DenseMatrix {
    a.select_columns(perm)
}

/// Rows `e_i − e_{i+1}`; the null space is spanned by the all-ones vector.
pub fn difference_matrix(n: usize) -> DenseMatrix {
    let mut a = DenseMatrix::zeros(n - 1, n);
    for i in 0..n - 1 {
        a[(i, i)] = 1.0;
        a[(i, i + 1)] = -1.0;
    }
    a
}

/// Random bounded, feasible LP with 3..=7 variables and 1..=3 rows.
///
/// Variables are boxed, `≥ 0` with positive cost, `≤ u` with negative cost, or
/// (at most one) free with zero cost, so the objective is bounded below and the
/// feasible set has vertices.
pub fn random_feasible_lp(seed: u64) -> LpProblem {
    let mut s = SeededSampler::new(seed);
    let nv = 3 + s.index(5);
    let rows = 1 + s.index(3.min(nv - 1));
    let mut c = vec![0.0; nv];
    let mut lo = vec![0.0; nv];
    let mut up = vec![0.0; nv];
    let mut x0 = vec![0.0; nv];
    let mut has_free = false;
    for j in 0..nv {
        match s.index(4) {
            1 => {
                c[j] = s.uniform_in(0.1, 2.0);
                up[j] = f64::INFINITY;
                x0[j] = s.uniform_in(0.0, 2.0);
            }
            2 => {
                c[j] = -s.uniform_in(0.1, 2.0);
                lo[j] = f64::NEG_INFINITY;
                up[j] = s.uniform_in(-1.0, 1.0);
                x0[j] = up[j] - s.uniform_in(0.0, 2.0);
            }
            3 if !has_free => {
                has_free = true;
                lo[j] = f64::NEG_INFINITY;
                up[j] = f64::INFINITY;
                x0[j] = s.standard_normal();
            }
            _ => {
                c[j] = s.standard_normal();
                lo[j] = s.uniform_in(-2.0, 1.0);
                up[j] = lo[j] + s.uniform_in(0.5, 3.0);
                x0[j] = s.uniform_in(lo[j], up[j]);
            }
        }
    }
    let e = gaussian_matrix(rows, nv, seed.wrapping_add(1_000_003));
    let b = e.mul_vec(&x0).unwrap();
    LpProblem::new(c, e, b, lo, up).unwrap()
}

/// Solves `M x = rhs` by Gaussian elimination with partial pivoting.
pub fn solve_square(m: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(*b);
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[piv][c].abs() < PIVOT_TOL {
            return None;
        }
        a.swap(c, piv);
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for j in c..=n {
                a[i][j] -= f * a[c][j];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (a[i][n] - s) / a[i][i];
    }
    Some(x)
}

/// Optimal value by enumerating every basic solution of a pointed LP.
pub fn lp_vertex_oracle(prob: &LpProblem) -> Option<f64> {
    let (nv, rows) = (prob.num_vars(), prob.num_rows());
    let (lo, up) = (prob.lower(), prob.upper());
    let e = prob.eq_matrix();
    let mut best: Option<f64> = None;
    for basic in (0..nv).combinations(rows) {
        let nonbasic: Vec<usize> = (0..nv).filter(|j| !basic.contains(j)).collect();
        if nonbasic
            .iter()
            .any(|&j| !lo[j].is_finite() && !up[j].is_finite())
        {
            continue;
        }
        let choices: Vec<Vec<f64>> = nonbasic
            .iter()
            .map(|&j| {
                [lo[j], up[j]]
                    .into_iter()
                    .filter(|v| v.is_finite())
                    .collect()
            })
            .collect();
        for values in choices
            .iter()
            .map(|c| c.iter().copied())
            .multi_cartesian_product()
        {
            let mut x = vec![0.0; nv];
            for (&j, v) in nonbasic.iter().zip(&values) {
                x[j] = *v;
            }
            let rhs: Vec<f64> = (0..rows)
                .map(|i| prob.eq_rhs()[i] - nonbasic.iter().map(|&j| e[(i, j)] * x[j]).sum::<f64>())
                .collect();
            let m: Vec<Vec<f64>> = (0..rows)
                .map(|i| basic.iter().map(|&j| e[(i, j)]).collect())
                .collect();
            let Some(xb) = solve_square(&m, &rhs) else {
                continue;
            };
            for (&j, v) in basic.iter().zip(&xb) {
                x[j] = *v;
            }
            if basic
                .iter()
                .any(|&j| x[j] < lo[j] - 1e-9 || x[j] > up[j] + 1e-9)
            {
                continue;
            }
            let obj: f64 = prob.objective().iter().zip(&x).map(|(c, x)| c * x).sum();
            best = Some(best.map_or(obj, |b: f64| b.min(obj)));
        }
    }
    best
}

/// `|dual bound − objective| ≤ 1e-7·max(1, |objective|)` for the solver's duals.
pub fn dual_certificate_matches(prob: &LpProblem, sol: &LpSolution) -> bool {
    let (Some(y), Some(obj)) = (&sol.duals, sol.objective_value) else {
        return false;
    };
    match dual_bound(prob, y) {
        Some(bound) => (bound - obj).abs() <= 1e-7 * obj.abs().max(1.0),
        None => false,
    }
}
