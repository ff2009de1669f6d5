//! Discrete forward operators: integration/differentiation on a 1-D grid,
//! 2-D convolution, the Radon transform, and the image gradient/divergence
//! pair used by total-variation regularization. Everything is exposed both
//! as plain functions and as [`LinearMap`]s with exact adjoints.

mod conv;
mod diff;
mod gradient;
mod radon;

pub use conv::{convolution_operator, convolve, convolve_adjoint, gaussian_kernel};
pub use diff::{backward_difference_operator, integration_operator};
pub use gradient::{div2d, grad2d, grad_operator};
pub use radon::{radon, radon_adjoint, radon_operator};

use crate::error::{Error, Result};
#[cfg(test)]
use crate::linop::LinearMap;

/// A cell-centered equidistant 2-D grid. Cell `(i, j)` (0-based) has center
/// `(a1 + (i + 1/2) h1, a2 + (j + 1/2) h2)`; axis 1 is the row index of the
/// image matrix, axis 2 the column index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub m1: usize,
    pub m2: usize,
    pub h1: f64,
    pub h2: f64,
    pub a1: f64,
    pub a2: f64,
}

impl Grid2D {
    pub fn new(m1: usize, m2: usize, h1: f64, h2: f64, a1: f64, a2: f64) -> Result<Self> {
        if m1 == 0 || m2 == 0 {
            return Err(Error::invalid("Grid2D: cell counts must be >= 1"));
        }
        if h1 <= 0.0 || h2 <= 0.0 {
            return Err(Error::invalid("Grid2D: step sizes must be positive"));
        }
        Ok(Grid2D {
            m1,
            m2,
            h1,
            h2,
            a1,
            a2,
        })
    }

    /// A grid of `m1 x m2` cells covering `[-w1/2, w1/2] x [-w2/2, w2/2]`,
    /// centered on the origin as the Radon transform expects.
    pub fn centered(m1: usize, m2: usize, w1: f64, w2: f64) -> Result<Self> {
        Grid2D::new(m1, m2, w1 / m1 as f64, w2 / m2 as f64, -w1 / 2.0, -w2 / 2.0)
    }

    pub fn cell_center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.a1 + (i as f64 + 0.5) * self.h1,
            self.a2 + (j as f64 + 0.5) * self.h2,
        )
    }

    pub fn len(&self) -> usize {
        self.m1 * self.m2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// How convolution treats indices outside the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryRule {
    /// Missing values are zero (no signal outside the detector).
    #[default]
    Zero,
    /// Indices wrap around.
    Circular,
    /// Indices reflect at the border (half-sample symmetric: -1 -> 0).
    Reflect,
}

/// A square convolution kernel of odd side length `2 * radius + 1`, stored
/// row-major with the origin at the center.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel2D {
    radius: usize,
    weights: Vec<f64>,
}

impl Kernel2D {
    pub fn new(radius: usize, weights: Vec<f64>) -> Result<Self> {
        let side = 2 * radius + 1;
        if weights.len() != side * side {
            return Err(Error::dim("Kernel2D::new", side * side, weights.len()));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("Kernel2D: non-finite weight"));
        }
        Ok(Kernel2D { radius, weights })
    }

    /// The identity kernel: 1 at the center, 0 elsewhere.
    pub fn delta(radius: usize) -> Self {
        let side = 2 * radius + 1;
        let mut weights = vec![0.0; side * side];
        weights[(side * side) / 2] = 1.0;
        Kernel2D { radius, weights }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Weight at offset `(di, dj)`, each in `[-radius, radius]`.
    pub fn weight(&self, di: isize, dj: isize) -> f64 {
        let side = (2 * self.radius + 1) as isize;
        let r = self.radius as isize;
        self.weights[((di + r) * side + (dj + r)) as usize]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Line-integral measurements indexed by ray angle and signed offset;
/// `values` is row-major with one row per angle.
#[derive(Debug, Clone, PartialEq)]
pub struct Sinogram {
    pub angles: Vec<f64>,
    pub offsets: Vec<f64>,
    pub values: Vec<f64>,
}

impl Sinogram {
    pub fn new(angles: Vec<f64>, offsets: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if angles.is_empty() || offsets.is_empty() {
            return Err(Error::EmptyInput("Sinogram: angles/offsets"));
        }
        if values.len() != angles.len() * offsets.len() {
            return Err(Error::dim(
                "Sinogram::new",
                angles.len() * offsets.len(),
                values.len(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("Sinogram: non-finite value"));
        }
        Ok(Sinogram {
            angles,
            offsets,
            values,
        })
    }

    pub fn value(&self, angle_idx: usize, offset_idx: usize) -> f64 {
        self.values[angle_idx * self.offsets.len() + offset_idx]
    }
}

/// Check an operator's adjoint pair on random vectors; tolerance matches the
/// repo-wide adjoint identity.
#[cfg(test)]
pub(crate) fn assert_adjoint_identity(op: &LinearMap, pairs: usize, seed: u64) {
    use crate::linop::{dot, norm2};
    let mut rng = crate::rng::CounterRng::new(seed);
    for _ in 0..pairs {
        let x = rng.uniform_vec(op.cols(), -1.0, 1.0);
        let y = rng.uniform_vec(op.rows(), -1.0, 1.0);
        let ax = op.apply(&x).unwrap();
        let aty = op.adjoint_apply(&y).unwrap();
        let gap = (dot(&ax, &y) - dot(&x, &aty)).abs();
        assert!(
            gap <= 1e-10 * (1.0 + norm2(&ax) * norm2(&y)),
            "adjoint identity violated: gap {gap}"
        );
    }
}
