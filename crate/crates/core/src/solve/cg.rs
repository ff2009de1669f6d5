//! Conjugate gradient for symmetric positive definite systems `C u = b`.

use super::{IterationLog, IterationRecord, SolveStatus};
use crate::error::{Error, Result};
use crate::linop::{dot, norm2, LinearMap};

/// The five-line CG recursion: residual `r`, direction `p`, step `alpha`,
/// update, and Fletcher-Reeves `beta`. Stops once `||C u - b|| <= tol`
/// (absolute) or after `max_iter` steps; symmetry and positive definiteness
/// are the caller's contract, but non-positive curvature is detected and
/// reported.
pub fn conjugate_gradient(
    c: &LinearMap,
    b: &[f64],
    u0: &[f64],
    max_iter: usize,
    tol: f64,
) -> Result<(Vec<f64>, IterationLog)> {
    if c.rows() != c.cols() {
        return Err(Error::dim("conjugate_gradient: square operator", c.rows(), c.cols()));
    }
    let mut log = IterationLog::new();
    let mut u = u0.to_vec();
    let mut r = crate::linop::sub(b, &c.apply(&u)?);
    let mut p = r.clone();
    let mut rr = dot(&r, &r);

    if rr.sqrt() <= tol {
        log.status = SolveStatus::Converged;
        return Ok((u, log));
    }

    for k in 1..=max_iter {
        let cp = c.apply(&p)?;
        let pcp = dot(&p, &cp);
        if pcp <= 0.0 {
            return Err(Error::NotPositiveDefinite(pcp));
        }
        let alpha = rr / pcp;
        for (ui, pi) in u.iter_mut().zip(&p) {
            *ui += alpha * pi;
        }
        for (ri, cpi) in r.iter_mut().zip(&cp) {
            *ri -= alpha * cpi;
        }
        let rr_next = dot(&r, &r);
        log.push(IterationRecord {
            k,
            objective: None,
            residual: Some(rr_next.sqrt()),
            step_norm: alpha.abs() * norm2(&p),
        });
        if rr_next.sqrt() <= tol {
            log.status = SolveStatus::Converged;
            return Ok((u, log));
        }
        let beta = rr_next / rr;
        rr = rr_next;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
    }
    Ok((u, log))
}
