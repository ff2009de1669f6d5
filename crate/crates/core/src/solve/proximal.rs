//! Proximal point, proximal gradient (forward-backward splitting), its ISTA
//! specialization, and the plug-and-play variant with a generic denoiser.

use super::{step_small, IterationLog, IterationRecord, SolveStatus};
use crate::linop::{norm2, LinearMap};
use crate::prox::{L1Prox, ProxOp};

/// `u_{k+1} = prox_{tau J}(u_k)`.
pub fn proximal_point(
    prox: &dyn ProxOp,
    u0: &[f64],
    tau: f64,
    max_iter: usize,
    tol: f64,
    objective: Option<&dyn Fn(&[f64]) -> f64>,
) -> (Vec<f64>, IterationLog) {
    assert!(tau > 0.0, "proximal_point: tau must be positive");
    let mut log = IterationLog::new();
    let mut u = u0.to_vec();
    for k in 1..=max_iter {
        let next = prox.evaluate(&u, tau);
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

/// Forward-backward splitting
/// `u_{k+1} = prox_{tau G}(u_k - tau * grad H(u_k))`; the rate contract
/// needs `tau <= 1/L` for the Lipschitz constant of `grad H`.
pub fn proximal_gradient(
    grad_h: &dyn Fn(&[f64]) -> Vec<f64>,
    prox_g: &dyn ProxOp,
    u0: &[f64],
    tau: f64,
    max_iter: usize,
    tol: f64,
    objective: Option<&dyn Fn(&[f64]) -> f64>,
) -> (Vec<f64>, IterationLog) {
    assert!(tau > 0.0, "proximal_gradient: tau must be positive");
    let mut log = IterationLog::new();
    let mut u = u0.to_vec();
    for k in 1..=max_iter {
        let g = grad_h(&u);
        let forward: Vec<f64> = u.iter().zip(&g).map(|(ui, gi)| ui - tau * gi).collect();
        let next = prox_g.evaluate(&forward, tau);
        if next.iter().any(|v| !v.is_finite()) {
            log.status = SolveStatus::Aborted;
            return (u, log);
        }
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

/// Iterated soft thresholding: proximal gradient on
/// `H = ||A u - f||^2 / 2`, `G = alpha ||u||_1`, i.e.
/// `u_{k+1} = shrink_{tau alpha}(u_k - tau A'(A u_k - f))`.
pub fn ista(
    a: &LinearMap,
    f: &[f64],
    alpha: f64,
    tau: f64,
    u0: &[f64],
    max_iter: usize,
    tol: f64,
) -> (Vec<f64>, IterationLog) {
    let a_grad = a.clone();
    let f_grad = f.to_vec();
    let grad_h = move |u: &[f64]| -> Vec<f64> {
        let residual = crate::linop::sub(&a_grad.apply(u).expect("ista shapes"), &f_grad);
        a_grad.adjoint_apply(&residual).expect("ista shapes")
    };
    let prox = L1Prox { weight: alpha };
    let a_obj = a.clone();
    let f_obj = f.to_vec();
    let objective = move |u: &[f64]| -> f64 {
        let r = crate::linop::sub(&a_obj.apply(u).expect("ista shapes"), &f_obj);
        0.5 * crate::linop::dot(&r, &r) + alpha * u.iter().map(|x| x.abs()).sum::<f64>()
    };
    proximal_gradient(&grad_h, &prox, u0, tau, max_iter, tol, Some(&objective))
}

/// Plug-and-play proximal gradient: the prox step is replaced by an
/// arbitrary denoiser. Logs the fixed-point residual `||u_{k+1} - u_k||`.
pub fn pnp_pgd(
    grad_h: &dyn Fn(&[f64]) -> Vec<f64>,
    denoiser: &dyn Fn(&[f64]) -> Vec<f64>,
    u0: &[f64],
    tau: f64,
    max_iter: usize,
    tol: f64,
) -> (Vec<f64>, IterationLog) {
    assert!(tau > 0.0, "pnp_pgd: tau must be positive");
    let mut log = IterationLog::new();
    let mut u = u0.to_vec();
    for k in 1..=max_iter {
        let g = grad_h(&u);
        let forward: Vec<f64> = u.iter().zip(&g).map(|(ui, gi)| ui - tau * gi).collect();
        let next = denoiser(&forward);
        if next.iter().any(|v| !v.is_finite()) {
            log.status = SolveStatus::Aborted;
            return (u, log);
        }
        let step_norm = norm2(&crate::linop::sub(&next, &u));
        let anchor = norm2(&u);
        u = next;
        log.push(IterationRecord {
            k,
            objective: None,
            residual: Some(step_norm),
            step_norm,
        });
        if step_small(step_norm, anchor, tol) {
            log.status = SolveStatus::Converged;
            return (u, log);
        }
    }
    (u, log)
}
