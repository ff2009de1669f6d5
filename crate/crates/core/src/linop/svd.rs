//! Singular value decomposition by one-sided Jacobi rotations.
//!
//! The factorization is stored as a singular system: triples
//! `(sigma_i, right_i, left_i)` with `A right_i = sigma_i left_i` and
//! `A^T left_i = sigma_i right_i`. Values below the rank cutoff are dropped
//! rather than stored as zeros, so `rank == singular_values.len()`.

use super::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Relative cutoff below which singular values are treated as zero:
/// values `sigma <= DEFAULT_RANK_CUTOFF * sigma_max` are dropped.
pub const DEFAULT_RANK_CUTOFF: f64 = 1e-12;

const MAX_SWEEPS: usize = 64;
/// A column pair counts as orthogonal once |<a_p, a_q>| is below this times
/// ||a_p|| ||a_q||.
const ORTHO_TOL: f64 = 1e-15;

#[derive(Debug, Clone)]
pub struct SvdFactorization {
    singular_values: Vec<f64>,
    /// Range-side orthonormal vectors (length = matrix rows).
    left_vectors: Vec<Vec<f64>>,
    /// Domain-side orthonormal vectors (length = matrix cols).
    right_vectors: Vec<Vec<f64>>,
    rows: usize,
    cols: usize,
}

impl SvdFactorization {
    /// Non-increasing, strictly positive singular values.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn left_vector(&self, i: usize) -> &[f64] {
        &self.left_vectors[i]
    }

    pub fn right_vector(&self, i: usize) -> &[f64] {
        &self.right_vectors[i]
    }

    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    /// Reassemble `sum_i sigma_i left_i right_i^T`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows, self.cols);
        for ((sigma, left), right) in self
            .singular_values
            .iter()
            .zip(&self.left_vectors)
            .zip(&self.right_vectors)
        {
            for (i, li) in left.iter().enumerate() {
                for (j, rj) in right.iter().enumerate() {
                    m[(i, j)] += sigma * li * rj;
                }
            }
        }
        m
    }

    /// Assemble the Moore-Penrose pseudo-inverse `sum_i (1/sigma_i) right_i left_i^T`.
    pub fn pseudo_inverse_matrix(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.cols, self.rows);
        for ((sigma, left), right) in self
            .singular_values
            .iter()
            .zip(&self.left_vectors)
            .zip(&self.right_vectors)
        {
            for (j, rj) in right.iter().enumerate() {
                for (i, li) in left.iter().enumerate() {
                    m[(j, i)] += rj * li / sigma;
                }
            }
        }
        m
    }
}

/// One-sided Jacobi (Hestenes) SVD.
///
/// Columns of a working copy of `A` are orthogonalized by plane rotations;
/// the accumulated rotations give the domain-side vectors, the normalized
/// columns the range-side vectors. `rank_cutoff` is relative to the largest
/// singular value. Robust and simple; adequate up to a few hundred columns.
pub fn svd(matrix: &DenseMatrix, rank_cutoff: f64) -> Result<SvdFactorization> {
    if matrix.data().iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("svd: matrix has non-finite entries"));
    }
    // Work on the taller orientation so the rotation loops touch long columns.
    if matrix.rows() < matrix.cols() {
        let flipped = svd(&matrix.transpose(), rank_cutoff)?;
        return Ok(SvdFactorization {
            singular_values: flipped.singular_values,
            left_vectors: flipped.right_vectors,
            right_vectors: flipped.left_vectors,
            rows: matrix.rows(),
            cols: matrix.cols(),
        });
    }

    let m = matrix.rows();
    let n = matrix.cols();
    // Column-major working copy: columns of A.
    let mut a: Vec<Vec<f64>> = (0..n).map(|j| matrix.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let mut worst = 0.0_f64;
    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        worst = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                let (alpha, beta, gamma) = {
                    let (ap, aq) = (&a[p], &a[q]);
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = 0.0;
                    for i in 0..m {
                        alpha += ap[i] * ap[i];
                        beta += aq[i] * aq[i];
                        gamma += ap[i] * aq[i];
                    }
                    (alpha, beta, gamma)
                };
                let scale = (alpha * beta).sqrt();
                if scale == 0.0 || gamma.abs() <= ORTHO_TOL * scale {
                    continue;
                }
                worst = worst.max(gamma.abs() / scale);

                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;

                let (ap, aq) = pair_mut(&mut a, p, q);
                rotate(ap, aq, c, s);
                let (vp, vq) = pair_mut(&mut v, p, q);
                rotate(vp, vq, c, s);
            }
        }
        if worst <= ORTHO_TOL {
            converged = true;
            break;
        }
    }
    if !converged && worst > 1e-12 {
        return Err(Error::NonConvergence {
            iterations: MAX_SWEEPS,
            residual: worst,
        });
    }

    // Column norms are the singular values; sort descending.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = a
        .iter()
        .map(|col| col.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let sigma_max = norms[order[0]];
    let cutoff = rank_cutoff * sigma_max;

    let mut singular_values = Vec::new();
    let mut left_vectors = Vec::new();
    let mut right_vectors = Vec::new();
    for &j in &order {
        let sigma = norms[j];
        if sigma <= cutoff || sigma == 0.0 {
            break;
        }
        singular_values.push(sigma);
        left_vectors.push(a[j].iter().map(|x| x / sigma).collect());
        right_vectors.push(v[j].clone());
    }

    Ok(SvdFactorization {
        singular_values,
        left_vectors,
        right_vectors,
        rows: m,
        cols: n,
    })
}

/// [`svd`] with the default machine-precision-scaled rank cutoff.
pub fn svd_default(matrix: &DenseMatrix) -> Result<SvdFactorization> {
    svd(matrix, DEFAULT_RANK_CUTOFF)
}

fn pair_mut(cols: &mut [Vec<f64>], p: usize, q: usize) -> (&mut Vec<f64>, &mut Vec<f64>) {
    debug_assert!(p < q);
    let (head, tail) = cols.split_at_mut(q);
    (&mut head[p], &mut tail[0])
}

#[inline]
fn rotate(x: &mut [f64], y: &mut [f64], c: f64, s: f64) {
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        let xv = *xi;
        let yv = *yi;
        *xi = c * xv - s * yv;
        *yi = s * xv + c * yv;
    }
}
