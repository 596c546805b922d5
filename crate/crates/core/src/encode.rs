//! LP encodings over a null-space basis.
//!
//! Every program here has the same column layout: `x` (p free coefficients),
//! `t` (n epigraph variables with `|[Nx]_j| ≤ t_j`), then the two n-blocks of
//! slacks that turn `±[Nx]_j − t_j ≤ 0` into equalities. Programs over the
//! ℓ₁ ball add one trailing slack for `Σt ≤ 1`.

use crate::error::Result;
use crate::linalg::{DenseMatrix, NullSpaceBasis};
use crate::lp::LpProblem;

const INF: f64 = f64::INFINITY;

/// Column offsets of the shared layout.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Layout {
    pub p: usize,
    pub n: usize,
}

impl Layout {
    pub fn of(basis: &NullSpaceBasis) -> Self {
        Self {
            p: basis.p(),
            n: basis.n(),
        }
    }

    pub fn t(&self, j: usize) -> usize {
        self.p + j
    }

    fn slack_pos(&self, j: usize) -> usize {
        self.p + self.n + j
    }

    fn slack_neg(&self, j: usize) -> usize {
        self.p + 2 * self.n + j
    }

    fn base_vars(&self) -> usize {
        self.p + 3 * self.n
    }
}

/// Writes rows `offset + j` and `offset + n + j`: `±[Nx]_j − t_j + s = 0`.
fn write_epigraph_rows(e: &mut DenseMatrix, offset: usize, lay: Layout, basis: &NullSpaceBasis) {
    let nmat = basis.matrix();
    for j in 0..lay.n {
        for c in 0..lay.p {
            e[(offset + j, c)] = nmat[(j, c)];
            e[(offset + lay.n + j, c)] = -nmat[(j, c)];
        }
        e[(offset + j, lay.t(j))] = -1.0;
        e[(offset + j, lay.slack_pos(j))] = 1.0;
        e[(offset + lay.n + j, lay.t(j))] = -1.0;
        e[(offset + lay.n + j, lay.slack_neg(j))] = 1.0;
    }
}

fn base_bounds(lay: Layout, extra: usize) -> (Vec<f64>, Vec<f64>) {
    let total = lay.base_vars() + extra;
    let mut lower = vec![0.0; total];
    let upper = vec![INF; total];
    for l in &mut lower[..lay.p] {
        *l = -INF;
    }
    (lower, upper)
}

/// `min Σt` over the face `[Nx]_i = sign, |[Nx]_j| ≤ 1 (j ≠ i)`.
pub(crate) fn face_lp(basis: &NullSpaceBasis, face: usize, sign: f64) -> Result<LpProblem> {
    let lay = Layout::of(basis);
    let rows = 1 + 2 * lay.n;
    let mut e = DenseMatrix::zeros(rows, lay.base_vars());
    for c in 0..lay.p {
        e[(0, c)] = basis.matrix()[(face, c)];
    }
    write_epigraph_rows(&mut e, 1, lay, basis);

    let mut rhs = vec![0.0; rows];
    rhs[0] = sign;

    let (lower, mut upper) = base_bounds(lay, 0);
    for j in 0..lay.n {
        if j != face {
            upper[lay.t(j)] = 1.0;
        }
    }

    let mut cost = vec![0.0; lay.base_vars()];
    for j in 0..lay.n {
        cost[lay.t(j)] = 1.0;
    }
    LpProblem::new(cost, e, rhs, lower, upper)
}

/// `min c_xᵀx` over `‖Nx‖₁ ≤ 1`.
pub(crate) fn l1_ball_lp(basis: &NullSpaceBasis, x_cost: &[f64]) -> Result<LpProblem> {
    let lay = Layout::of(basis);
    let rows = 2 * lay.n + 1;
    let vars = lay.base_vars() + 1;
    let mut e = DenseMatrix::zeros(rows, vars);
    write_epigraph_rows(&mut e, 0, lay, basis);
    for j in 0..lay.n {
        e[(2 * lay.n, lay.t(j))] = 1.0;
    }
    e[(2 * lay.n, vars - 1)] = 1.0;

    let mut rhs = vec![0.0; rows];
    rhs[2 * lay.n] = 1.0;

    let (lower, upper) = base_bounds(lay, 1);
    let mut cost = vec![0.0; vars];
    cost[..lay.p].copy_from_slice(x_cost);
    LpProblem::new(cost, e, rhs, lower, upper)
}

/// Basis pursuit `min Σt` s.t. `Ax = y`, `|x_j| ≤ t_j`, with the same column
/// layout but `x ∈ ℝⁿ` in place of the null-space coefficients.
pub(crate) fn basis_pursuit_lp(a: &DenseMatrix, y: &[f64]) -> Result<LpProblem> {
    let (m, n) = a.shape();
    // x: 0..n, t: n..2n, s+: 2n..3n, s-: 3n..4n
    let vars = 4 * n;
    let rows = m + 2 * n;
    let mut e = DenseMatrix::zeros(rows, vars);
    for i in 0..m {
        for j in 0..n {
            e[(i, j)] = a[(i, j)];
        }
    }
    for j in 0..n {
        let (r_pos, r_neg) = (m + j, m + n + j);
        e[(r_pos, j)] = 1.0;
        e[(r_pos, n + j)] = -1.0;
        e[(r_pos, 2 * n + j)] = 1.0;
        e[(r_neg, j)] = -1.0;
        e[(r_neg, n + j)] = -1.0;
        e[(r_neg, 3 * n + j)] = 1.0;
    }
    let mut rhs = vec![0.0; rows];
    rhs[..m].copy_from_slice(y);

    let mut lower = vec![0.0; vars];
    for l in &mut lower[..n] {
        *l = -INF;
    }
    let upper = vec![INF; vars];
    let mut cost = vec![0.0; vars];
    for c in &mut cost[n..2 * n] {
        *c = 1.0;
    }
    LpProblem::new(cost, e, rhs, lower, upper)
}
