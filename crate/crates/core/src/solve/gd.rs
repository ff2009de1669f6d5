//! Plain gradient descent `u_{k+1} = u_k - tau * grad(u_k)`.

use super::{step_small, IterationLog, IterationRecord, SolveStatus};
use crate::linop::norm2;

/// Runs at most `max_iter` steps; a non-finite gradient aborts the run and
/// returns the last finite iterate. Pass `tol = 0` to force the full budget
/// (rate experiments need the raw trajectory).
pub fn gradient_descent(
    grad: &dyn Fn(&[f64]) -> Vec<f64>,
    u0: &[f64],
    tau: f64,
    max_iter: usize,
    tol: f64,
    objective: Option<&dyn Fn(&[f64]) -> f64>,
) -> (Vec<f64>, IterationLog) {
    assert!(tau > 0.0, "gradient_descent: tau must be positive");
    let mut log = IterationLog::new();
    let mut u = u0.to_vec();
    for k in 1..=max_iter {
        let g = grad(&u);
        if g.iter().any(|v| !v.is_finite()) {
            log.status = SolveStatus::Aborted;
            return (u, log);
        }
        let next: Vec<f64> = u.iter().zip(&g).map(|(ui, gi)| ui - tau * gi).collect();
        let step_norm = norm2(&crate::linop::sub(&next, &u));
        let anchor = norm2(&u);
        u = next;
        log.push(IterationRecord {
            k,
            objective: objective.map(|f| f(&u)),
            residual: None,
            step_norm,
        });
        if step_small(step_norm, anchor, tol) {
            log.status = SolveStatus::Converged;
            return (u, log);
        }
    }
    (u, log)
}
