//! Least-squares distance from a target to the span of a finite family,
//! through the Gram system `G x = b`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compensated::{self, NeumaierSum};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Solver {
    Cholesky,
    PivotedLu,
}

/// Ridge schedule: `eps = scale * trace / dim`, `scale` starting at
/// `initial_scale` and multiplied by `growth` up to `max_scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RidgePolicy {
    pub initial_scale: f64,
    pub growth: f64,
    pub max_scale: f64,
}

impl Default for RidgePolicy {
    fn default() -> Self {
        Self { initial_scale: 1e-14, growth: 10.0, max_scale: 1e-4 }
    }
}

/// Dimensions above which eigenvalues come from power iteration instead of a
/// full symmetric eigendecomposition.
const DENSE_EIGEN_LIMIT: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct GramSystem {
    pub gram: DMatrix<f64>,
    pub target_ip: DVector<f64>,
    pub target_norm2: f64,
    /// Norm bound on the discarded tail of each spanning vector.
    pub tail_bounds: Vec<f64>,
    /// Truncation length the entries were computed at.
    pub n_trunc: usize,
}

/// Solution of a Gram system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramSolution {
    pub coefficients: Vec<f64>,
    pub distance: f64,
    pub distance_squared: f64,
    /// True when `||t||^2 - 2 x.b + x.Gx` came out negative and was clamped.
    pub clamped: bool,
    pub solver: Solver,
    pub regularization: f64,
    pub condition_estimate: f64,
    pub min_eigenvalue: f64,
    /// `||(G + eps I) x - b||_inf` after refinement.
    pub solve_residual: f64,
    /// `sum |x_i| t_i`: the untruncated distance lies within
    /// `[distance, distance + truncation_bound]`.
    pub truncation_bound: f64,
}

impl GramSystem {
    /// Gram system of explicit vectors under the weight `w(i)`.
    pub fn from_vectors(
        vectors: &[Vec<f64>],
        target: &[f64],
        tail_bounds: Vec<f64>,
        weight: impl Fn(usize) -> f64 + Sync,
    ) -> Result<Self> {
        let m = vectors.len();
        if tail_bounds.len() != m {
            return Err(Error::invalid("one tail bound per vector"));
        }
        let n = target.len();
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::invalid("vectors must share the target's length"));
        }
        let w: Vec<f64> = (0..n).map(&weight).collect();
        let wt: Vec<f64> = target.iter().zip(&w).map(|(t, w)| t * w).collect();
        let rows: Vec<Vec<f64>> = (0..m)
            .into_par_iter()
            .map(|i| {
                let wi: Vec<f64> = vectors[i].iter().zip(&w).map(|(a, w)| a * w).collect();
                (0..=i).map(|j| compensated::dot(&wi, &vectors[j])).collect()
            })
            .collect();
        let gram = DMatrix::from_fn(m, m, |i, j| if j <= i { rows[i][j] } else { rows[j][i] });
        let target_ip = DVector::from_iterator(m, vectors.iter().map(|v| compensated::dot(&wt, v)));
        let target_norm2 = compensated::dot(&wt, target);
        Ok(Self { gram, target_ip, target_norm2, tail_bounds, n_trunc: n })
    }

    pub fn dim(&self) -> usize {
        self.target_ip.len()
    }

    /// System for the first `m` spanning vectors.
    pub fn leading(&self, m: usize) -> Result<Self> {
        if m > self.dim() {
            return Err(Error::invalid(format!("leading block {m} exceeds dimension {}", self.dim())));
        }
        Ok(Self {
            gram: self.gram.view((0, 0), (m, m)).into_owned(),
            target_ip: self.target_ip.rows(0, m).into_owned(),
            target_norm2: self.target_norm2,
            tail_bounds: self.tail_bounds[..m].to_vec(),
            n_trunc: self.n_trunc,
        })
    }

    pub fn trace(&self) -> f64 {
        compensated::sum(self.gram.diagonal().iter().copied())
    }

    /// `(lambda_min, lambda_max)` of `G` without regularization.
    pub fn eigen_range(&self) -> (f64, f64) {
        let m = self.dim();
        if m == 0 {
            return (0.0, 0.0);
        }
        if m <= DENSE_EIGEN_LIMIT {
            let ev = self.gram.clone().symmetric_eigenvalues();
            return (ev.min(), ev.max());
        }
        let hi = power_iteration(m, |v| &self.gram * v);
        let shifted = DMatrix::from_diagonal_element(m, m, hi) - &self.gram;
        let lo = hi - power_iteration(m, |v| &shifted * v);
        (lo, hi)
    }

    pub fn solve(&self, policy: RidgePolicy) -> Result<GramSolution> {
        let m = self.dim();
        if m == 0 {
            let d2 = self.target_norm2.max(0.0);
            return Ok(GramSolution {
                coefficients: Vec::new(),
                distance: d2.sqrt(),
                distance_squared: d2,
                clamped: false,
                solver: Solver::Cholesky,
                regularization: 0.0,
                condition_estimate: 1.0,
                min_eigenvalue: 0.0,
                solve_residual: 0.0,
                truncation_bound: 0.0,
            });
        }
        if self.gram.diagonal().iter().any(|d| !(*d > 0.0)) {
            return Err(Error::SolverFailure {
                ridge: 0.0,
                reason: "Gram diagonal must be strictly positive".into(),
            });
        }
        let unit = self.trace() / m as f64;
        let (lo, hi) = self.eigen_range();
        let mut scale = policy.initial_scale;
        while scale <= policy.max_scale * (1.0 + 1e-12) {
            let eps = scale * unit;
            let a = &self.gram + DMatrix::from_diagonal_element(m, m, eps);
            if let Some(x) = solve_cholesky(&a, &self.target_ip) {
                return Ok(self.finish(x, &a, Solver::Cholesky, eps, lo, hi));
            }
            if let Some(x) = solve_lu(&a, &self.target_ip) {
                return Ok(self.finish(x, &a, Solver::PivotedLu, eps, lo, hi));
            }
            scale *= policy.growth;
        }
        Err(Error::SolverFailure {
            ridge: policy.max_scale * unit,
            reason: "factorization failed at every ridge in the schedule".into(),
        })
    }

    fn finish(
        &self,
        x: DVector<f64>,
        a: &DMatrix<f64>,
        solver: Solver,
        eps: f64,
        lo: f64,
        hi: f64,
    ) -> GramSolution {
        let residual = (a * &x - &self.target_ip).amax();
        let xb = compensated::dot(x.as_slice(), self.target_ip.as_slice());
        let gx = &self.gram * &x;
        let xgx = compensated::dot(x.as_slice(), gx.as_slice());
        let mut acc = NeumaierSum::new();
        acc.add(self.target_norm2);
        acc.add(-2.0 * xb);
        acc.add(xgx);
        let raw = acc.value();
        let d2 = raw.max(0.0);
        let truncation_bound =
            compensated::sum(x.iter().zip(&self.tail_bounds).map(|(xi, t)| xi.abs() * t));
        let lo_reg = lo + eps;
        GramSolution {
            coefficients: x.as_slice().to_vec(),
            distance: d2.sqrt(),
            distance_squared: d2,
            clamped: raw < 0.0,
            solver,
            regularization: eps,
            condition_estimate: if lo_reg > 0.0 { ((hi + eps) / lo_reg).max(1.0) } else { f64::INFINITY },
            min_eigenvalue: lo,
            solve_residual: residual,
            truncation_bound,
        }
    }
}

/// Cholesky solve with one step of iterative refinement.
fn solve_cholesky(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let chol = a.clone().cholesky()?;
    let mut x = chol.solve(b);
    let r = b - a * &x;
    x += chol.solve(&r);
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn solve_lu(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let lu = a.clone().full_piv_lu();
    let mut x = lu.solve(b)?;
    let r = b - a * &x;
    x += lu.solve(&r)?;
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn power_iteration(m: usize, apply: impl Fn(&DVector<f64>) -> DVector<f64>) -> f64 {
    let mut v = DVector::from_fn(m, |i, _| 1.0 + (i % 7) as f64 * 1e-3);
    v /= v.norm();
    let mut lambda = 0.0;
    for _ in 0..200 {
        let w = apply(&v);
        let next = v.dot(&w);
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        v = w / nw;
        if (next - lambda).abs() <= 1e-10 * next.abs() {
            return next;
        }
        lambda = next;
    }
    lambda
}
