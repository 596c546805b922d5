//! Dense bounded-variable primal simplex.
//!
//! Problems are stated in one canonical form:
//!
//! ```text
//! minimize cᵀz  subject to  E z = b,  lower ≤ z ≤ upper
//! ```
//!
//! where bounds may be infinite. Inequalities are expressed by the caller with
//! explicit slack columns. The solver runs a two-phase method (phase one drives
//! one artificial per row to zero), refactors the basis with partial-pivoting LU
//! on every iteration and recomputes the basic values from scratch, so there is
//! no drift from product-form updates. Dantzig pricing is used until the number
//! of degenerate pivots exceeds `2 * num_vars`, after which Bland's smallest-index
//! rule takes over for the rest of the phase.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, DenseMatrix, Lu};

/// Internal feasibility/optimality tolerance.
pub const SOLVER_TOL: f64 = 1e-9;
/// Tolerance callers may rely on when checking returned points.
pub const CONTRACT_TOL: f64 = 1e-8;

const PIVOT_TOL: f64 = 1e-9;
const RATIO_TIE: f64 = 1e-12;
const DEGENERATE_STEP: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpProblem {
    objective: Vec<f64>,
    eq_matrix: DenseMatrix,
    eq_rhs: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl LpProblem {
    pub fn new(
        objective: Vec<f64>,
        eq_matrix: DenseMatrix,
        eq_rhs: Vec<f64>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> Result<Self> {
        let n = objective.len();
        if eq_matrix.cols() != n {
            return Err(Error::InvalidProblem(format!(
                "constraint matrix has {} columns for {} variables",
                eq_matrix.cols(),
                n
            )));
        }
        if eq_rhs.len() != eq_matrix.rows() {
            return Err(Error::InvalidProblem(format!(
                "{} right-hand sides for {} rows",
                eq_rhs.len(),
                eq_matrix.rows()
            )));
        }
        if lower.len() != n || upper.len() != n {
            return Err(Error::InvalidProblem(
                "bound vectors must have one entry per variable".into(),
            ));
        }
        if objective.iter().chain(&eq_rhs).any(|v| !v.is_finite()) {
            return Err(Error::InvalidProblem(
                "objective and right-hand side must be finite".into(),
            ));
        }
        for j in 0..n {
            let (l, u) = (lower[j], upper[j]);
            if l.is_nan() || u.is_nan() || l == f64::INFINITY || u == f64::NEG_INFINITY || l > u {
                return Err(Error::InvalidProblem(format!(
                    "bad bounds [{l}, {u}] on variable {j}"
                )));
            }
        }
        Ok(Self {
            objective,
            eq_matrix,
            eq_rhs,
            lower,
            upper,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.eq_rhs.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn eq_matrix(&self) -> &DenseMatrix {
        &self.eq_matrix
    }

    pub fn eq_rhs(&self) -> &[f64] {
        &self.eq_rhs
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Same constraints, objective multiplied by `factor`.
    pub fn with_scaled_objective(&self, factor: f64) -> Self {
        Self {
            objective: self.objective.iter().map(|c| c * factor).collect(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal point, present iff `status == Optimal`.
    pub point: Option<Vec<f64>>,
    pub objective_value: Option<f64>,
    /// Simplex iterations over both phases.
    pub iterations: usize,
    /// Row multipliers `y = B⁻ᵀ c_B` from the final basis, present iff optimal.
    pub duals: Option<Vec<f64>>,
}

impl LpSolution {
    fn without_point(status: LpStatus, iterations: usize) -> Self {
        Self {
            status,
            point: None,
            objective_value: None,
            iterations,
            duals: None,
        }
    }

    /// Point and objective of an optimal solution.
    pub fn optimum(&self) -> Result<(&[f64], f64)> {
        match (self.status, &self.point, self.objective_value) {
            (LpStatus::Optimal, Some(p), Some(v)) => Ok((p, v)),
            (LpStatus::Infeasible, ..) => Err(Error::LpInfeasible),
            (LpStatus::Unbounded, ..) => Err(Error::LpUnbounded),
            _ => Err(Error::Internal("optimal solution without a point".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable held at zero.
    Zero,
}

enum PhaseEnd {
    Optimal(Vec<f64>),
    Unbounded,
}

struct Simplex<'a> {
    prob: &'a LpProblem,
    rows: usize,
    structural: usize,
    art_sign: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    x: Vec<f64>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    iterations: usize,
    cap: usize,
}

impl<'a> Simplex<'a> {
    fn new(prob: &'a LpProblem) -> Self {
        let rows = prob.num_rows();
        let structural = prob.num_vars();
        let total = structural + rows;

        let mut lower = prob.lower.clone();
        let mut upper = prob.upper.clone();
        lower.extend(std::iter::repeat_n(0.0, rows));
        upper.extend(std::iter::repeat_n(f64::INFINITY, rows));

        let mut x = vec![0.0; total];
        let mut state = vec![VarState::Basic; total];
        for j in 0..structural {
            let (l, u) = (lower[j], upper[j]);
            (x[j], state[j]) = if l.is_finite() {
                (l, VarState::AtLower)
            } else if u.is_finite() {
                (u, VarState::AtUpper)
            } else {
                (0.0, VarState::Zero)
            };
        }

        let mut art_sign = vec![1.0; rows];
        for i in 0..rows {
            let res = prob.eq_rhs[i] - dot(prob.eq_matrix.row(i), &x[..structural]);
            art_sign[i] = if res >= 0.0 { 1.0 } else { -1.0 };
            x[structural + i] = res.abs();
        }

        Self {
            prob,
            rows,
            structural,
            art_sign,
            lower,
            upper,
            x,
            state,
            basis: (structural..total).collect(),
            iterations: 0,
            cap: 50 * (structural + rows),
        }
    }

    fn total(&self) -> usize {
        self.structural + self.rows
    }

    fn column(&self, j: usize) -> Vec<f64> {
        if j < self.structural {
            self.prob.eq_matrix.column(j)
        } else {
            let mut e = vec![0.0; self.rows];
            e[j - self.structural] = self.art_sign[j - self.structural];
            e
        }
    }

    /// `column(j) · y` without materializing the column.
    fn column_dot(&self, j: usize, y: &[f64]) -> f64 {
        if j < self.structural {
            (0..self.rows)
                .map(|i| self.prob.eq_matrix[(i, j)] * y[i])
                .sum()
        } else {
            let i = j - self.structural;
            self.art_sign[i] * y[i]
        }
    }

    fn factor_basis(&self) -> Result<Lu> {
        let mut b = DenseMatrix::zeros(self.rows, self.rows);
        for (c, &j) in self.basis.iter().enumerate() {
            for (i, v) in self.column(j).into_iter().enumerate() {
                b[(i, c)] = v;
            }
        }
        Lu::factor(&b)
            .map_err(|e| Error::NumericalBreakdown(format!("basis factorization failed: {e}")))
    }

    fn recompute_basics(&mut self, lu: &Lu) {
        let mut rhs = self.prob.eq_rhs.clone();
        for j in 0..self.total() {
            if self.state[j] == VarState::Basic || self.x[j] == 0.0 {
                continue;
            }
            let xj = self.x[j];
            if j < self.structural {
                for (i, r) in rhs.iter_mut().enumerate() {
                    *r -= self.prob.eq_matrix[(i, j)] * xj;
                }
            } else {
                let i = j - self.structural;
                rhs[i] -= self.art_sign[i] * xj;
            }
        }
        let xb = lu.solve(&rhs);
        for (row, &j) in self.basis.iter().enumerate() {
            self.x[j] = xb[row];
        }
    }

    /// Entering variable and its direction (`+1` increase, `-1` decrease).
    fn price(&self, cost: &[f64], y: &[f64], bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..self.total() {
            let st = self.state[j];
            if st == VarState::Basic || self.lower[j] == self.upper[j] {
                continue;
            }
            let d = cost[j] - self.column_dot(j, y);
            let dir = match st {
                VarState::AtLower if d < -SOLVER_TOL => 1.0,
                VarState::AtUpper if d > SOLVER_TOL => -1.0,
                VarState::Zero if d < -SOLVER_TOL => 1.0,
                VarState::Zero if d > SOLVER_TOL => -1.0,
                _ => continue,
            };
            if bland {
                return Some((j, dir));
            }
            if best.is_none_or(|(_, _, s)| d.abs() > s) {
                best = Some((j, dir, d.abs()));
            }
        }
        best.map(|(j, dir, _)| (j, dir))
    }

    fn run_phase(&mut self, cost: &[f64]) -> Result<PhaseEnd> {
        let mut degenerate = 0usize;
        let mut bland = false;
        loop {
            let lu = self.factor_basis()?;
            self.recompute_basics(&lu);
            let cb: Vec<f64> = self.basis.iter().map(|&j| cost[j]).collect();
            let y = lu.solve_transpose(&cb);

            let Some((entering, dir)) = self.price(cost, &y, bland) else {
                return Ok(PhaseEnd::Optimal(y));
            };
            if self.iterations >= self.cap {
                return Err(Error::NumericalBreakdown(format!(
                    "iteration cap {} reached",
                    self.cap
                )));
            }
            self.iterations += 1;

            let w = lu.solve(&self.column(entering));
            let (l, u) = (self.lower[entering], self.upper[entering]);
            let mut theta = if l.is_finite() && u.is_finite() {
                u - l
            } else {
                f64::INFINITY
            };
            // (row, leaves at upper, |rate|)
            let mut leave: Option<(usize, bool, f64)> = None;

            for (row, &wr) in w.iter().enumerate() {
                let rate = -dir * wr;
                if rate.abs() <= PIVOT_TOL {
                    continue;
                }
                let b = self.basis[row];
                let (ratio, to_upper) = if rate < 0.0 {
                    if !self.lower[b].is_finite() {
                        continue;
                    }
                    ((self.x[b] - self.lower[b]) / -rate, false)
                } else {
                    if !self.upper[b].is_finite() {
                        continue;
                    }
                    ((self.upper[b] - self.x[b]) / rate, true)
                };
                let ratio = ratio.max(0.0);
                let take = if ratio < theta - RATIO_TIE {
                    true
                } else if ratio <= theta + RATIO_TIE {
                    match leave {
                        None => false,
                        Some((prev, _, prev_rate)) => {
                            if bland {
                                b < self.basis[prev]
                            } else {
                                rate.abs() > prev_rate
                            }
                        }
                    }
                } else {
                    false
                };
                if take {
                    theta = ratio;
                    leave = Some((row, to_upper, rate.abs()));
                }
            }

            if theta == f64::INFINITY {
                return Ok(PhaseEnd::Unbounded);
            }

            match leave {
                Some((row, to_upper, _)) => {
                    let b = self.basis[row];
                    if to_upper {
                        self.state[b] = VarState::AtUpper;
                        self.x[b] = self.upper[b];
                    } else {
                        self.state[b] = VarState::AtLower;
                        self.x[b] = self.lower[b];
                    }
                    self.x[entering] += dir * theta;
                    self.basis[row] = entering;
                    self.state[entering] = VarState::Basic;
                }
                None => {
                    // bound flip, basis unchanged
                    if dir > 0.0 {
                        self.state[entering] = VarState::AtUpper;
                        self.x[entering] = u;
                    } else {
                        self.state[entering] = VarState::AtLower;
                        self.x[entering] = l;
                    }
                }
            }

            if theta <= DEGENERATE_STEP {
                degenerate += 1;
                if degenerate > 2 * self.structural {
                    bland = true;
                }
            }
        }
    }

    fn solve(mut self) -> Result<LpSolution> {
        let n = self.structural;
        let total = self.total();

        if self.rows > 0 {
            let mut phase_one = vec![0.0; total];
            for c in &mut phase_one[n..] {
                *c = 1.0;
            }
            // phase one is bounded below by zero
            if let PhaseEnd::Unbounded = self.run_phase(&phase_one)? {
                return Err(Error::NumericalBreakdown(
                    "phase one reported unbounded".into(),
                ));
            }
            let infeasibility: f64 = self.x[n..].iter().sum();
            let scale = 1.0 + self.prob.eq_rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if infeasibility > SOLVER_TOL * scale {
                return Ok(LpSolution::without_point(
                    LpStatus::Infeasible,
                    self.iterations,
                ));
            }
            for j in n..total {
                self.upper[j] = 0.0;
                if self.state[j] != VarState::Basic {
                    self.state[j] = VarState::AtLower;
                    self.x[j] = 0.0;
                }
            }
        }

        let mut cost = self.prob.objective.clone();
        cost.resize(total, 0.0);
        match self.run_phase(&cost)? {
            PhaseEnd::Unbounded => Ok(LpSolution::without_point(
                LpStatus::Unbounded,
                self.iterations,
            )),
            PhaseEnd::Optimal(y) => {
                let point = self.x[..n].to_vec();
                let value = dot(&self.prob.objective, &point);
                Ok(LpSolution {
                    status: LpStatus::Optimal,
                    point: Some(point),
                    objective_value: Some(value),
                    iterations: self.iterations,
                    duals: Some(y),
                })
            }
        }
    }
}

/// Solves `prob` to optimality, infeasibility or unboundedness.
pub fn solve(prob: &LpProblem) -> Result<LpSolution> {
    Simplex::new(prob).solve()
}

/// Independent feasibility and objective check of an optimal solution.
///
/// Uses only matrix arithmetic on the original problem data. Errors if the
/// solution is not marked optimal.
pub fn check_solution(prob: &LpProblem, sol: &LpSolution, tol: f64) -> Result<bool> {
    let (point, value) = sol.optimum()?;
    if point.len() != prob.num_vars() {
        return Ok(false);
    }
    for i in 0..prob.num_rows() {
        let lhs = dot(prob.eq_matrix.row(i), point);
        if (lhs - prob.eq_rhs[i]).abs() > tol * prob.eq_rhs[i].abs().max(1.0) {
            return Ok(false);
        }
    }
    for (j, &z) in point.iter().enumerate() {
        if z < prob.lower[j] - tol || z > prob.upper[j] + tol {
            return Ok(false);
        }
    }
    let recomputed = dot(&prob.objective, point);
    Ok((recomputed - value).abs() <= tol * value.abs().max(1.0))
}

/// Lagrangian dual bound `bᵀy + Σⱼ min_{lⱼ≤zⱼ≤uⱼ} (cⱼ − Eⱼᵀy) zⱼ` for row multipliers `y`.
///
/// Returns `None` when `y` is not dual feasible, i.e. some reduced cost
/// pushes toward an infinite bound by more than the solver tolerance.
pub fn dual_bound(prob: &LpProblem, y: &[f64]) -> Option<f64> {
    if y.len() != prob.num_rows() {
        return None;
    }
    let mut bound = dot(&prob.eq_rhs, y);
    for j in 0..prob.num_vars() {
        let d = prob.objective[j]
            - (0..prob.num_rows())
                .map(|i| prob.eq_matrix[(i, j)] * y[i])
                .sum::<f64>();
        let (l, u) = (prob.lower[j], prob.upper[j]);
        if d > 0.0 {
            if l.is_finite() {
                bound += d * l;
            } else if d > SOLVER_TOL {
                return None;
            }
        } else if d < 0.0 {
            if u.is_finite() {
                bound += d * u;
            } else if d < -SOLVER_TOL {
                return None;
            }
        }
    }
    Some(bound)
}
