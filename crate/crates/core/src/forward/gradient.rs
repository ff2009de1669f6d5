//! Forward-difference image gradient and its negative adjoint, the discrete
//! divergence, with the zero last row/column convention:
//!
//! ```text
//! (grad u)_{1,i,j} = u_{i+1,j} - u_{i,j}   (last row zero)
//! (grad u)_{2,i,j} = u_{i,j+1} - u_{i,j}   (last column zero)
//! ```

use crate::error::{Error, Result};
use crate::linop::{DenseMatrix, LinearMap};

/// Both components of the discrete gradient, returned as `[d1, d2]`.
pub fn grad2d(image: &DenseMatrix) -> [DenseMatrix; 2] {
    let (m, n) = (image.rows(), image.cols());
    let mut d1 = DenseMatrix::zeros(m, n);
    let mut d2 = DenseMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            if i + 1 < m {
                d1[(i, j)] = image[(i + 1, j)] - image[(i, j)];
            }
            if j + 1 < n {
                d2[(i, j)] = image[(i, j + 1)] - image[(i, j)];
            }
        }
    }
    [d1, d2]
}

/// Discrete divergence, satisfying `<grad u, p> = -<u, div p>` exactly. The
/// last row of `p1` and last column of `p2` carry no weight in the forward
/// gradient, so the adjoint ignores them.
pub fn div2d(field: &[DenseMatrix; 2]) -> Result<DenseMatrix> {
    let [p1, p2] = field;
    let (m, n) = (p1.rows(), p1.cols());
    if p2.rows() != m || p2.cols() != n {
        return Err(Error::dim("div2d: component shapes", m * n, p2.rows() * p2.cols()));
    }
    let mut out = DenseMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            let a1 = if i + 1 < m { p1[(i, j)] } else { 0.0 };
            let b1 = if i > 0 { p1[(i - 1, j)] } else { 0.0 };
            let a2 = if j + 1 < n { p2[(i, j)] } else { 0.0 };
            let b2 = if j > 0 { p2[(i, j - 1)] } else { 0.0 };
            out[(i, j)] = (a1 - b1) + (a2 - b2);
        }
    }
    Ok(out)
}

/// The gradient as a [`LinearMap`] from flattened `m x n` images to flattened
/// `2 x m x n` fields (component-major); the adjoint is `-div`.
pub fn grad_operator(m: usize, n: usize) -> LinearMap {
    let len = m * n;
    LinearMap::new(
        2 * len,
        len,
        move |x: &[f64]| {
            let img = DenseMatrix::from_vec(m, n, x.to_vec()).expect("shape checked");
            let [d1, d2] = grad2d(&img);
            let mut out = Vec::with_capacity(2 * len);
            out.extend_from_slice(d1.data());
            out.extend_from_slice(d2.data());
            out
        },
        move |y: &[f64]| {
            let p1 = DenseMatrix::from_vec(m, n, y[..len].to_vec()).expect("shape checked");
            let p2 = DenseMatrix::from_vec(m, n, y[len..].to_vec()).expect("shape checked");
            let div = div2d(&[p1, p2]).expect("shapes match");
            div.data().iter().map(|v| -v).collect()
        },
    )
}
