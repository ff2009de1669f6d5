//! First-order solvers with per-iteration logging.
//!
//! All solvers share the scale-free stopping rule
//! `||u_{k+1} - u_k|| <= tol * (1 + ||u_k||)` (or the iteration budget,
//! whichever comes first) and report how they stopped in the
//! [`IterationLog`].

mod admm;
mod cg;
mod gd;
mod primal_dual;
mod proximal;

pub use admm::admm;
pub use cg::conjugate_gradient;
pub use gd::gradient_descent;
pub use primal_dual::{chambolle_pock, tv_objective, tv_reconstruct};
pub use proximal::{ista, pnp_pgd, proximal_gradient, proximal_point};

use crate::error::{Error, Result};

/// Step sizes and budgets for the iterative solvers. Not every solver reads
/// every field; constructors validate what they set.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Primal step size.
    pub tau: f64,
    /// Dual step size (Chambolle-Pock).
    pub sigma: f64,
    /// Overrelaxation parameter in [0, 1] (Chambolle-Pock).
    pub theta: f64,
    /// Augmented-Lagrangian weight (ADMM).
    pub mu: f64,
    pub max_iter: usize,
    /// Tolerance for the scale-free step-norm stopping rule.
    pub tol: f64,
    /// Known strong-convexity constant, used only by rate checks.
    pub nu: Option<f64>,
    /// Record the objective every `log_every` iterations (0 = never).
    pub log_every: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tau: 1.0,
            sigma: 1.0,
            theta: 1.0,
            mu: 1.0,
            max_iter: 1000,
            tol: 1e-10,
            nu: None,
            log_every: 1,
        }
    }
}

impl SolverConfig {
    pub fn new(tau: f64, max_iter: usize, tol: f64) -> Result<Self> {
        if tau <= 0.0 {
            return Err(Error::invalid(format!("tau must be positive, got {tau}")));
        }
        Ok(SolverConfig {
            tau,
            max_iter,
            tol,
            ..SolverConfig::default()
        })
    }

    /// Chambolle-Pock steps, enforcing `tau * sigma * ||A||^2 < 1` at
    /// construction.
    pub fn for_primal_dual(
        tau: f64,
        sigma: f64,
        theta: f64,
        operator_norm: f64,
        max_iter: usize,
        tol: f64,
    ) -> Result<Self> {
        if tau <= 0.0 || sigma <= 0.0 {
            return Err(Error::invalid("tau and sigma must be positive"));
        }
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::invalid(format!("theta must be in [0, 1], got {theta}")));
        }
        let product = tau * sigma * operator_norm * operator_norm;
        if product >= 1.0 {
            return Err(Error::invalid(format!(
                "step condition violated: tau * sigma * |A|^2 = {product:.6} >= 1"
            )));
        }
        Ok(SolverConfig {
            tau,
            sigma,
            theta,
            max_iter,
            tol,
            ..SolverConfig::default()
        })
    }

    /// Default Chambolle-Pock steps `tau = sigma = 0.99 / ||A||`, `theta = 1`.
    pub fn default_primal_dual(operator_norm: f64, max_iter: usize, tol: f64) -> Result<Self> {
        let step = if operator_norm > 0.0 {
            0.99 / operator_norm
        } else {
            1.0
        };
        SolverConfig::for_primal_dual(step, step, 1.0, operator_norm, max_iter, tol)
    }

    pub fn with_mu(mut self, mu: f64) -> Result<Self> {
        if mu <= 0.0 {
            return Err(Error::invalid(format!("mu must be positive, got {mu}")));
        }
        self.mu = mu;
        Ok(self)
    }
}

/// How an iteration ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Step-norm (or residual) tolerance reached.
    Converged,
    /// Budget exhausted; the returned iterate is the best available.
    MaxIterReached,
    /// A non-finite value appeared; the last finite iterate was returned.
    Aborted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub objective: Option<f64>,
    pub residual: Option<f64>,
    pub step_norm: f64,
}

#[derive(Debug, Clone)]
pub struct IterationLog {
    pub records: Vec<IterationRecord>,
    pub status: SolveStatus,
}

impl IterationLog {
    pub fn new() -> Self {
        IterationLog {
            records: Vec::new(),
            status: SolveStatus::MaxIterReached,
        }
    }

    pub fn push(&mut self, record: IterationRecord) {
        if let Some(last) = self.records.last() {
            debug_assert!(record.k > last.k, "iteration counter must increase");
        }
        debug_assert!(record.step_norm.is_finite());
        self.records.push(record);
    }

    pub fn iterations(&self) -> usize {
        self.records.last().map_or(0, |r| r.k)
    }

    pub fn final_objective(&self) -> Option<f64> {
        self.records.iter().rev().find_map(|r| r.objective)
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.records.iter().rev().find_map(|r| r.residual)
    }

    pub fn objectives(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.records.iter().filter_map(|r| r.objective.map(|o| (r.k, o)))
    }
}

impl Default for IterationLog {
    fn default() -> Self {
        IterationLog::new()
    }
}

/// Shared stopping rule; `tol = 0` disables early stopping (rate experiments
/// need the full trajectory).
pub(crate) fn step_small(step_norm: f64, anchor_norm: f64, tol: f64) -> bool {
    tol > 0.0 && step_norm <= tol * (1.0 + anchor_norm)
}
