//! Operator-norm estimation and conditioning diagnostics.

use super::dense::DenseMatrix;
use super::map::LinearMap;
use super::svd::svd_default;
use super::{dot, norm2};
use crate::error::{Error, Result};
use crate::rng::CounterRng;

/// Power-method estimate of the largest singular value.
///
/// Runs `iters` iterations of the power method on `A^T A` from a seeded
/// random start; the returned Rayleigh-quotient estimate is monotone
/// non-decreasing in `iters`. A zero operator returns 0.
pub fn operator_norm(op: &LinearMap, iters: usize, seed: u64) -> f64 {
    if op.rows() == 0 || op.cols() == 0 {
        return 0.0;
    }
    let mut rng = CounterRng::new(seed);
    let mut x = rng.uniform_vec(op.cols(), -1.0, 1.0);
    let nx = norm2(&x);
    if nx == 0.0 {
        return 0.0;
    }
    for v in &mut x {
        *v /= nx;
    }

    let mut lambda = 0.0;
    for _ in 0..iters.max(1) {
        let y = op
            .adjoint_apply(&op.apply(&x).expect("shape checked"))
            .expect("shape checked");
        lambda = dot(&x, &y);
        let ny = norm2(&y);
        if ny == 0.0 {
            return 0.0;
        }
        x = y.iter().map(|v| v / ny).collect();
    }
    lambda.max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionNumbers {
    /// `sigma_max^2 / sigma_min^2`: conditioning of the unregularized normal
    /// operator `A^T A`. Infinite for rank-deficient matrices.
    pub mle: f64,
    /// `(sigma_max^2 + ratio) / (sigma_min^2 + ratio)`: conditioning of
    /// `A^T A + ratio * I`.
    pub map: f64,
}

/// Condition numbers of the plain and shifted normal operator, where `ratio`
/// is the noise-to-prior variance quotient of the Gaussian-prior estimator.
///
/// `map <= mle` always; at `ratio = 0` the two coincide. A rank-deficient
/// matrix with `ratio = 0` is an error (the condition number is infinite).
pub fn condition_numbers(matrix: &DenseMatrix, ratio: f64) -> Result<ConditionNumbers> {
    if ratio < 0.0 {
        return Err(Error::invalid(format!("ratio must be >= 0, got {ratio}")));
    }
    let f = svd_default(matrix)?;
    if f.rank() == 0 {
        return Err(Error::invalid("condition_numbers: zero matrix"));
    }
    // Dropped singular values count as exact zeros.
    let full_rank = matrix.rows().min(matrix.cols());
    let sigma_min = if f.rank() < full_rank { 0.0 } else { f.sigma_min() };
    let sigma_max = f.sigma_max();

    if sigma_min == 0.0 && ratio == 0.0 {
        return Err(Error::InfiniteCondition);
    }
    let mle = if sigma_min > 0.0 {
        (sigma_max / sigma_min).powi(2)
    } else {
        f64::INFINITY
    };
    let map = (sigma_max * sigma_max + ratio) / (sigma_min * sigma_min + ratio);
    Ok(ConditionNumbers { mle, map })
}
