//! ADMM for `min_u ||u - f||^2 / 2 + alpha ||B u||_1` via the constraint
//! `B u = v` (TV denoising when `B` is the image gradient).
//!
//! Augmented-Lagrangian updates with scaled multiplier `q`:
//!
//! ```text
//! u: solve (I + mu B^T B) u = f + mu B^T (v - q)      (inner CG)
//! v: shrink_{alpha / mu}(B u + q)
//! q: q + B u - v
//! ```

use super::{conjugate_gradient, IterationLog, IterationRecord};
use crate::error::{Error, Result};
use crate::linop::{dot, norm2, LinearMap};
use crate::prox::shrink;

const INNER_CG_TOL: f64 = 1e-10;
const INNER_CG_CAP: usize = 500;

pub fn admm(
    op: &LinearMap,
    f: &[f64],
    alpha: f64,
    mu: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, IterationLog)> {
    if mu <= 0.0 {
        return Err(Error::invalid(format!("admm: mu must be positive, got {mu}")));
    }
    if alpha < 0.0 {
        return Err(Error::invalid("admm: alpha must be >= 0"));
    }
    if f.len() != op.cols() {
        return Err(Error::dim("admm: data size", op.cols(), f.len()));
    }

    let n = op.cols();
    let b = op.clone();
    let system = LinearMap::new(
        n,
        n,
        {
            let b = b.clone();
            move |x: &[f64]| {
                let mut y = b.adjoint_apply(&b.apply(x).expect("admm shapes")).expect("admm shapes");
                for (yi, xi) in y.iter_mut().zip(x) {
                    *yi = mu * *yi + xi;
                }
                y
            }
        },
        {
            let b = b.clone();
            move |x: &[f64]| {
                let mut y = b.adjoint_apply(&b.apply(x).expect("admm shapes")).expect("admm shapes");
                for (yi, xi) in y.iter_mut().zip(x) {
                    *yi = mu * *yi + xi;
                }
                y
            }
        },
    );

    let mut log = IterationLog::new();
    let mut u = f.to_vec();
    let mut v = op.apply(&u)?;
    let mut q = vec![0.0; op.rows()];

    for k in 1..=max_iter {
        let u_prev = u.clone();
        let rhs: Vec<f64> = {
            let vq = crate::linop::sub(&v, &q);
            let bt = op.adjoint_apply(&vq)?;
            f.iter().zip(&bt).map(|(fi, bi)| fi + mu * bi).collect()
        };
        // Warm-started inner solve; inexact u-updates would spoil the
        // cross-method comparisons.
        let (u_next, _) = conjugate_gradient(&system, &rhs, &u, INNER_CG_CAP, INNER_CG_TOL)?;
        u = u_next;

        let bu = op.apply(&u)?;
        let shifted = crate::linop::add(&bu, &q);
        v = shrink(&shifted, alpha / mu)?;
        for ((qi, bi), vi) in q.iter_mut().zip(&bu).zip(&v) {
            *qi += bi - vi;
        }

        let primal_residual = norm2(&crate::linop::sub(&bu, &v));
        let data = crate::linop::sub(&u, f);
        let objective =
            0.5 * dot(&data, &data) + alpha * bu.iter().map(|x| x.abs()).sum::<f64>();
        log.push(IterationRecord {
            k,
            objective: Some(objective),
            residual: Some(primal_residual),
            step_norm: norm2(&crate::linop::sub(&u, &u_prev)),
        });
    }
    Ok((u, log))
}
