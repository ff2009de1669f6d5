//! Closed-form proximal operators.
//!
//! `prox_{tau J}(v) = argmin_u J(u) + ||u - v||^2 / (2 tau)` — the resolvent
//! of `tau * dJ`. Only the closed forms consumed by the solvers are shipped;
//! each is non-expansive and reduces to the identity as `tau -> 0`.

mod transform;

pub use transform::{haar_transform, haar_transform_2d, OrthogonalTransform};

use crate::error::{Error, Result};

/// Soft shrinkage, the prox of `tau * ||.||_1`: componentwise
/// `v - tau` above `tau`, `v + tau` below `-tau`, else 0.
pub fn shrink(v: &[f64], tau: f64) -> Result<Vec<f64>> {
    if tau < 0.0 {
        return Err(Error::invalid(format!("shrink: tau must be >= 0, got {tau}")));
    }
    Ok(v.iter()
        .map(|&x| {
            if x > tau {
                x - tau
            } else if x < -tau {
                x + tau
            } else {
                0.0
            }
        })
        .collect())
}

/// Prox of `J = ||. - center||^2 / 2`: the convex combination
/// `(v + tau * center) / (1 + tau)`.
pub fn prox_squared_l2(v: &[f64], tau: f64, center: &[f64]) -> Vec<f64> {
    debug_assert_eq!(v.len(), center.len());
    v.iter()
        .zip(center)
        .map(|(&x, &c)| (x + tau * c) / (1.0 + tau))
        .collect()
}

/// Prox of the conjugate of the data-fit term `||. - f||^2 / 2`:
/// componentwise `(z - sigma * f) / (sigma + 1)`. This is the dual-side
/// update of the primal-dual TV splitting.
pub fn prox_conj_datafit(z1: &[f64], sigma: f64, f: &[f64]) -> Vec<f64> {
    debug_assert_eq!(z1.len(), f.len());
    z1.iter()
        .zip(f)
        .map(|(&z, &fi)| (z - sigma * fi) / (sigma + 1.0))
        .collect()
}

/// Projection onto the infinity-norm ball of radius `alpha` (the prox of the
/// dualized l1 term): componentwise clamp to `[-alpha, alpha]`.
pub fn project_inf_ball(z2: &[f64], alpha: f64) -> Result<Vec<f64>> {
    if alpha < 0.0 {
        return Err(Error::invalid(format!(
            "project_inf_ball: alpha must be >= 0, got {alpha}"
        )));
    }
    Ok(z2.iter().map(|&z| z.clamp(-alpha, alpha)).collect())
}

/// Prox of `tau * ||W u||_1` for an orthogonal `W`: transform, shrink,
/// transform back.
pub fn prox_wavelet_l1(v: &[f64], tau: f64, w: &OrthogonalTransform) -> Result<Vec<f64>> {
    w.inverse(&shrink(&w.forward(v)?, tau)?)
}

/// A proximal operator together with the name of the functional it resolves.
pub trait ProxOp: Send + Sync {
    fn evaluate(&self, v: &[f64], tau: f64) -> Vec<f64>;
    fn descriptor(&self) -> &str;
}

/// Prox of the zero functional: the identity. Used when a splitting leaves
/// one block unregularized (G = 0).
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroProx;

impl ProxOp for ZeroProx {
    fn evaluate(&self, v: &[f64], _tau: f64) -> Vec<f64> {
        v.to_vec()
    }
    fn descriptor(&self) -> &str {
        "0"
    }
}

/// Prox of `weight * ||.||_1`.
#[derive(Debug, Clone, Copy)]
pub struct L1Prox {
    pub weight: f64,
}

impl ProxOp for L1Prox {
    fn evaluate(&self, v: &[f64], tau: f64) -> Vec<f64> {
        shrink(v, tau * self.weight).expect("tau * weight >= 0")
    }
    fn descriptor(&self) -> &str {
        "weight * |u|_1"
    }
}

/// Prox of `||. - center||^2 / 2`.
#[derive(Debug, Clone)]
pub struct SquaredDistanceProx {
    pub center: Vec<f64>,
}

impl ProxOp for SquaredDistanceProx {
    fn evaluate(&self, v: &[f64], tau: f64) -> Vec<f64> {
        prox_squared_l2(v, tau, &self.center)
    }
    fn descriptor(&self) -> &str {
        "|u - f|^2 / 2"
    }
}

/// Prox of `||W u||_1` for an orthogonal transform `W`.
#[derive(Debug, Clone)]
pub struct WaveletL1Prox {
    pub transform: OrthogonalTransform,
}

impl ProxOp for WaveletL1Prox {
    fn evaluate(&self, v: &[f64], tau: f64) -> Vec<f64> {
        prox_wavelet_l1(v, tau, &self.transform).expect("transform size fixed")
    }
    fn descriptor(&self) -> &str {
        "|W u|_1"
    }
}
