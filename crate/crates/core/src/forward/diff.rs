//! The 1-D integration operator and its exact inverse, the backward
//! finite-difference operator, on `N` equidistant grid points of `[0, 1]`.

use crate::error::{Error, Result};
use crate::linop::{DenseMatrix, LinearMap};

/// Discrete integration: the lower-triangular all-ones matrix scaled by
/// `1/(N-1)`, so `(A u)_i = (u_1 + ... + u_i) / (N-1)`. The scaling accounts
/// for the length of the discretized intervals.
pub fn integration_operator(n: usize) -> Result<LinearMap> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "integration_operator needs N >= 2, got {n}"
        )));
    }
    let scale = 1.0 / (n as f64 - 1.0);
    let mut dense = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            dense[(i, j)] = scale;
        }
    }
    Ok(LinearMap::new(
        n,
        n,
        move |x: &[f64]| {
            let mut acc = 0.0;
            x.iter()
                .map(|&v| {
                    acc += v;
                    acc * scale
                })
                .collect()
        },
        move |y: &[f64]| {
            // Transpose: suffix sums.
            let mut acc = 0.0;
            let mut out = vec![0.0; y.len()];
            for (o, &v) in out.iter_mut().rev().zip(y.iter().rev()) {
                acc += v;
                *o = acc * scale;
            }
            out
        },
    )
    .with_dense_view(dense))
}

/// Backward finite differences, the exact inverse of [`integration_operator`]:
/// the bidiagonal matrix `(N-1) (I - S)` with `S` the subdiagonal shift.
pub fn backward_difference_operator(n: usize) -> Result<LinearMap> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "backward_difference_operator needs N >= 2, got {n}"
        )));
    }
    let scale = n as f64 - 1.0;
    let mut dense = DenseMatrix::zeros(n, n);
    for i in 0..n {
        dense[(i, i)] = scale;
        if i > 0 {
            dense[(i, i - 1)] = -scale;
        }
    }
    Ok(LinearMap::new(
        n,
        n,
        move |x: &[f64]| {
            (0..x.len())
                .map(|i| {
                    if i == 0 {
                        scale * x[0]
                    } else {
                        scale * (x[i] - x[i - 1])
                    }
                })
                .collect()
        },
        move |y: &[f64]| {
            let n = y.len();
            (0..n)
                .map(|i| {
                    if i + 1 < n {
                        scale * (y[i] - y[i + 1])
                    } else {
                        scale * y[i]
                    }
                })
                .collect()
        },
    )
    .with_dense_view(dense))
}
