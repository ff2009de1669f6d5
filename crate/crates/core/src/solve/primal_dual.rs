//! The Chambolle-Pock primal-dual method and its total-variation
//! specialization.
//!
//! For `min_u G(u) + H(Au)` the scheme alternates
//!
//! ```text
//! u_{k+1} = prox_{tau G}(u_k - tau A^T p_k)
//! v_{k+1} = u_{k+1} + theta (u_{k+1} - u_k)
//! p_{k+1} = prox_{sigma H*}(p_k + sigma A v_{k+1})
//! ```
//!
//! with `tau sigma ||A||^2 < 1`. TV denoising uses the splitting `G = 0`,
//! `A = [A_tilde; grad]`, `H(z1, z2) = ||z1 - f||^2 / 2 + alpha ||z2||_1`,
//! whose dual prox is separable: the data block maps to
//! `(z1 - sigma f) / (sigma + 1)` and the gradient block projects onto the
//! infinity-norm ball of radius `alpha`.

use super::{step_small, IterationLog, IterationRecord, SolveStatus, SolverConfig};
use crate::error::{Error, Result};
use crate::forward::grad_operator;
use crate::linop::{norm2, operator_norm, LinearMap};
use crate::prox::{project_inf_ball, prox_conj_datafit};

/// Generic Chambolle-Pock. `prox_g(v, tau)` and `prox_h_star(z, sigma)` are
/// the resolvents of `G` and `H*`; `v_0 = u_0`. Returns the primal iterate.
#[allow(clippy::too_many_arguments)]
pub fn chambolle_pock(
    prox_g: &dyn Fn(&[f64], f64) -> Vec<f64>,
    prox_h_star: &dyn Fn(&[f64], f64) -> Vec<f64>,
    a: &LinearMap,
    cfg: &SolverConfig,
    u0: &[f64],
    p0: &[f64],
    objective: Option<&dyn Fn(&[f64]) -> f64>,
) -> Result<(Vec<f64>, IterationLog)> {
    if u0.len() != a.cols() {
        return Err(Error::dim("chambolle_pock: u0", a.cols(), u0.len()));
    }
    if p0.len() != a.rows() {
        return Err(Error::dim("chambolle_pock: p0", a.rows(), p0.len()));
    }
    let (tau, sigma, theta) = (cfg.tau, cfg.sigma, cfg.theta);
    let mut log = IterationLog::new();
    let mut u = u0.to_vec();
    let mut p = p0.to_vec();

    for k in 1..=cfg.max_iter {
        let atp = a.adjoint_apply(&p)?;
        let forward: Vec<f64> = u.iter().zip(&atp).map(|(ui, gi)| ui - tau * gi).collect();
        let u_next = prox_g(&forward, tau);

        let v: Vec<f64> = u_next
            .iter()
            .zip(&u)
            .map(|(un, uo)| un + theta * (un - uo))
            .collect();

        let av = a.apply(&v)?;
        let dual_forward: Vec<f64> = p.iter().zip(&av).map(|(pi, ai)| pi + sigma * ai).collect();
        let p_next = prox_h_star(&dual_forward, sigma);

        let step_norm = norm2(&crate::linop::sub(&u_next, &u));
        // The primal step alone can be zero while the dual still moves (e.g.
        // the very first iteration from p = 0), so stop on the joint step.
        let dual_step = norm2(&crate::linop::sub(&p_next, &p));
        let joint_step = (step_norm * step_norm + dual_step * dual_step).sqrt();
        let anchor = (norm2(&u).powi(2) + norm2(&p).powi(2)).sqrt();
        u = u_next;
        p = p_next;

        let record_objective = cfg.log_every > 0 && k % cfg.log_every == 0;
        log.push(IterationRecord {
            k,
            objective: if record_objective {
                objective.map(|f| f(&u))
            } else {
                None
            },
            residual: None,
            step_norm,
        });
        if step_small(joint_step, anchor, cfg.tol) {
            log.status = SolveStatus::Converged;
            return Ok((u, log));
        }
    }
    Ok((u, log))
}

/// The ROF-type objective `||A_tilde u - f||^2 / 2 + alpha ||grad u||_1`
/// on `shape` images, shared by the CP and ADMM routes.
pub fn tv_objective<'a>(
    a_tilde: &'a LinearMap,
    f: &'a [f64],
    alpha: f64,
    shape: (usize, usize),
) -> impl Fn(&[f64]) -> f64 + 'a {
    let grad = grad_operator(shape.0, shape.1);
    move |u: &[f64]| -> f64 {
        let r = crate::linop::sub(&a_tilde.apply(u).expect("tv shapes"), f);
        let g = grad.apply(u).expect("tv shapes");
        0.5 * crate::linop::dot(&r, &r) + alpha * g.iter().map(|x| x.abs()).sum::<f64>()
    }
}

/// TV-regularized reconstruction
/// `min_u ||A_tilde u - f||^2 / 2 + alpha TV(u)` via Chambolle-Pock with the
/// stacked operator `[A_tilde; grad]`. When `cfg.tau` or `cfg.sigma` is zero
/// the steps default to `0.99 / ||K||` from a power-method estimate.
pub fn tv_reconstruct(
    a_tilde: &LinearMap,
    f: &[f64],
    alpha: f64,
    shape: (usize, usize),
    cfg: &SolverConfig,
) -> Result<(Vec<f64>, IterationLog)> {
    let (m, n) = shape;
    if a_tilde.cols() != m * n {
        return Err(Error::dim("tv_reconstruct: image size", m * n, a_tilde.cols()));
    }
    if f.len() != a_tilde.rows() {
        return Err(Error::dim("tv_reconstruct: data size", a_tilde.rows(), f.len()));
    }
    if alpha < 0.0 {
        return Err(Error::invalid("tv_reconstruct: alpha must be >= 0"));
    }

    let stacked = LinearMap::stack(a_tilde, &grad_operator(m, n))?;
    let k_norm = operator_norm(&stacked, 300, 0x5EED);
    let mut run_cfg = cfg.clone();
    if cfg.tau <= 0.0 || cfg.sigma <= 0.0 {
        let step = if k_norm > 0.0 { 0.99 / k_norm } else { 1.0 };
        run_cfg.tau = step;
        run_cfg.sigma = step;
    }
    if run_cfg.tau * run_cfg.sigma * k_norm * k_norm >= 1.0 {
        return Err(Error::invalid(format!(
            "tv_reconstruct: step condition violated (tau sigma |K|^2 = {:.6})",
            run_cfg.tau * run_cfg.sigma * k_norm * k_norm
        )));
    }

    let data_rows = a_tilde.rows();
    let f_dual = f.to_vec();
    let prox_g = |v: &[f64], _tau: f64| v.to_vec();
    let prox_h_star = move |z: &[f64], sigma: f64| -> Vec<f64> {
        let mut out = prox_conj_datafit(&z[..data_rows], sigma, &f_dual);
        out.extend(project_inf_ball(&z[data_rows..], alpha).expect("alpha >= 0"));
        out
    };
    let objective = tv_objective(a_tilde, f, alpha, shape);

    let u0 = vec![0.0; m * n];
    let p0 = vec![0.0; stacked.rows()];
    chambolle_pock(
        &prox_g,
        &prox_h_star,
        &stacked,
        &run_cfg,
        &u0,
        &p0,
        Some(&objective),
    )
}
