//! Orthonormal multilevel Haar transform.
//!
//! The paper's sparsifying basis only needs to be linear and orthogonal; the
//! Haar wavelet is exactly orthogonal in finite dimensions and has a closed
//! form, so it stands in for the Daubechies family here. Lengths must be
//! powers of two; the 2-D variant is the tensor product (full 1-D transform
//! on every row, then on every column).

use crate::error::{Error, Result};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Line { len: usize },
    Plane { rows: usize, cols: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Identity,
    Haar,
}

/// A linear orthogonal transform `W` with `W^T W = I`; coefficients are
/// ordered coarsest-first (index 0 is the scaling/DC component).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalTransform {
    shape: Shape,
    kind: Kind,
}

fn require_power_of_two(n: usize, what: &str) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::invalid(format!(
            "{what} must be a power of two, got {n}"
        )));
    }
    Ok(())
}

/// Full multilevel orthonormal Haar transform on vectors of length `size`.
pub fn haar_transform(size: usize) -> Result<OrthogonalTransform> {
    require_power_of_two(size, "haar_transform size")?;
    Ok(OrthogonalTransform {
        shape: Shape::Line { len: size },
        kind: Kind::Haar,
    })
}

/// Tensor-product Haar transform on row-major `rows x cols` images.
pub fn haar_transform_2d(rows: usize, cols: usize) -> Result<OrthogonalTransform> {
    require_power_of_two(rows, "haar_transform_2d rows")?;
    require_power_of_two(cols, "haar_transform_2d cols")?;
    Ok(OrthogonalTransform {
        shape: Shape::Plane { rows, cols },
        kind: Kind::Haar,
    })
}

impl OrthogonalTransform {
    /// The trivial transform W = I (any size).
    pub fn identity(size: usize) -> Self {
        OrthogonalTransform {
            shape: Shape::Line { len: size },
            kind: Kind::Identity,
        }
    }

    pub fn size(&self) -> usize {
        match self.shape {
            Shape::Line { len } => len,
            Shape::Plane { rows, cols } => rows * cols,
        }
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.size() {
            return Err(Error::dim("OrthogonalTransform input", self.size(), x.len()));
        }
        Ok(())
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        let mut out = x.to_vec();
        match (self.kind, self.shape) {
            (Kind::Identity, _) => {}
            (Kind::Haar, Shape::Line { .. }) => haar_1d_forward(&mut out),
            (Kind::Haar, Shape::Plane { rows, cols }) => {
                for r in 0..rows {
                    haar_1d_forward(&mut out[r * cols..(r + 1) * cols]);
                }
                let mut col = vec![0.0; rows];
                for c in 0..cols {
                    for r in 0..rows {
                        col[r] = out[r * cols + c];
                    }
                    haar_1d_forward(&mut col);
                    for r in 0..rows {
                        out[r * cols + c] = col[r];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn inverse(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        self.check(coeffs)?;
        let mut out = coeffs.to_vec();
        match (self.kind, self.shape) {
            (Kind::Identity, _) => {}
            (Kind::Haar, Shape::Line { .. }) => haar_1d_inverse(&mut out),
            (Kind::Haar, Shape::Plane { rows, cols }) => {
                let mut col = vec![0.0; rows];
                for c in 0..cols {
                    for r in 0..rows {
                        col[r] = out[r * cols + c];
                    }
                    haar_1d_inverse(&mut col);
                    for r in 0..rows {
                        out[r * cols + c] = col[r];
                    }
                }
                for r in 0..rows {
                    haar_1d_inverse(&mut out[r * cols..(r + 1) * cols]);
                }
            }
        }
        Ok(out)
    }
}

/// One full pyramid: averages to the front, details behind, repeated until a
/// single scaling coefficient remains.
fn haar_1d_forward(data: &mut [f64]) {
    let mut n = data.len();
    let mut tmp = vec![0.0; n];
    while n > 1 {
        let half = n / 2;
        for i in 0..half {
            let a = data[2 * i];
            let b = data[2 * i + 1];
            tmp[i] = (a + b) * FRAC_1_SQRT_2;
            tmp[half + i] = (a - b) * FRAC_1_SQRT_2;
        }
        data[..n].copy_from_slice(&tmp[..n]);
        n = half;
    }
}

fn haar_1d_inverse(data: &mut [f64]) {
    let len = data.len();
    if len < 2 {
        return;
    }
    let mut tmp = vec![0.0; len];
    let mut n = 2;
    while n <= len {
        let half = n / 2;
        for i in 0..half {
            let a = data[i];
            let d = data[half + i];
            tmp[2 * i] = (a + d) * FRAC_1_SQRT_2;
            tmp[2 * i + 1] = (a - d) * FRAC_1_SQRT_2;
        }
        data[..n].copy_from_slice(&tmp[..n]);
        n *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::{dot, norm2};
    use crate::rng::CounterRng;

    #[test]
    fn rejects_non_power_of_two() {
        assert!(haar_transform(0).is_err());
        assert!(haar_transform(6).is_err());
        assert!(haar_transform_2d(4, 3).is_err());
    }

    #[test]
    fn constant_signal_concentrates_on_dc() {
        let w = haar_transform(8).unwrap();
        let coeffs = w.forward(&[2.0; 8]).unwrap();
        assert!((coeffs[0] - 2.0 * 8.0_f64.sqrt()).abs() < 1e-12);
        assert!(coeffs[1..].iter().all(|&c| c.abs() < 1e-12));
    }

    #[test]
    fn step_signal_lives_on_one_level() {
        // (1, 1, -1, -1): pairwise averages (sqrt2, -sqrt2) have no detail at
        // the finest level; everything sits in the single second-level detail.
        let w = haar_transform(4).unwrap();
        let coeffs = w.forward(&[1.0, 1.0, -1.0, -1.0]).unwrap();
        assert!(coeffs[0].abs() < 1e-12);
        assert!((coeffs[1] - 2.0).abs() < 1e-12);
        assert!(coeffs[2].abs() < 1e-12 && coeffs[3].abs() < 1e-12);
    }

    #[test]
    fn roundtrip_and_parseval_1d() {
        let w = haar_transform(64).unwrap();
        let mut rng = CounterRng::new(12);
        for _ in 0..20 {
            let x = rng.uniform_vec(64, -1.0, 1.0);
            let c = w.forward(&x).unwrap();
            assert!((norm2(&c) - norm2(&x)).abs() <= 1e-12 * (1.0 + norm2(&x)));
            let back = w.inverse(&c).unwrap();
            for (b, xi) in back.iter().zip(&x) {
                assert!((b - xi).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn inner_products_preserved() {
        let w = haar_transform(32).unwrap();
        let mut rng = CounterRng::new(21);
        for _ in 0..20 {
            let x = rng.uniform_vec(32, -1.0, 1.0);
            let y = rng.uniform_vec(32, -1.0, 1.0);
            let lhs = dot(&w.forward(&x).unwrap(), &w.forward(&y).unwrap());
            let rhs = dot(&x, &y);
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn roundtrip_2d() {
        let w = haar_transform_2d(8, 16).unwrap();
        let mut rng = CounterRng::new(33);
        let x = rng.uniform_vec(128, -1.0, 1.0);
        let c = w.forward(&x).unwrap();
        assert!((norm2(&c) - norm2(&x)).abs() <= 1e-12 * (1.0 + norm2(&x)));
        let back = w.inverse(&c).unwrap();
        for (b, xi) in back.iter().zip(&x) {
            assert!((b - xi).abs() <= 1e-12);
        }
    }

    #[test]
    fn constant_image_concentrates_on_dc() {
        let w = haar_transform_2d(4, 4).unwrap();
        let c = w.forward(&[1.0; 16]).unwrap();
        assert!((c[0] - 4.0).abs() < 1e-12);
        assert!(c[1..].iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn size_mismatch_rejected() {
        let w = haar_transform(8).unwrap();
        assert!(w.forward(&[0.0; 7]).is_err());
        assert!(w.inverse(&[0.0; 9]).is_err());
    }
}
