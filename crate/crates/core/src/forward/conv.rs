//! Direct-summation 2-D convolution with selectable boundary handling.

use super::{BoundaryRule, Kernel2D};
use crate::error::{Error, Result};
use crate::linop::{DenseMatrix, LinearMap};

/// Resolve an out-of-range index according to the boundary rule. `None`
/// means the sample contributes nothing (zero padding). The kernel-radius
/// precondition guarantees a single reflection/wrap suffices.
fn resolve(idx: isize, len: usize, boundary: BoundaryRule) -> Option<usize> {
    let n = len as isize;
    if (0..n).contains(&idx) {
        return Some(idx as usize);
    }
    match boundary {
        BoundaryRule::Zero => None,
        BoundaryRule::Circular => Some(idx.rem_euclid(n) as usize),
        BoundaryRule::Reflect => {
            let r = if idx < 0 { -idx - 1 } else { 2 * n - 1 - idx };
            Some(r as usize)
        }
    }
}

fn check_kernel_fits(kernel: &Kernel2D, m1: usize, m2: usize) -> Result<()> {
    if kernel.radius() >= m1.min(m2) {
        return Err(Error::invalid(format!(
            "kernel radius {} too large for {}x{} image",
            kernel.radius(),
            m1,
            m2
        )));
    }
    Ok(())
}

/// Discrete convolution `(g * u)(i) = sum_j g(j) u(i - j)` with the given
/// boundary rule; output has the same size as the input.
pub fn convolve(
    image: &DenseMatrix,
    kernel: &Kernel2D,
    boundary: BoundaryRule,
) -> Result<DenseMatrix> {
    let (m1, m2) = (image.rows(), image.cols());
    check_kernel_fits(kernel, m1, m2)?;
    let r = kernel.radius() as isize;
    let mut out = DenseMatrix::zeros(m1, m2);
    for i in 0..m1 as isize {
        for j in 0..m2 as isize {
            let mut acc = 0.0;
            for di in -r..=r {
                let Some(si) = resolve(i - di, m1, boundary) else {
                    continue;
                };
                for dj in -r..=r {
                    let Some(sj) = resolve(j - dj, m2, boundary) else {
                        continue;
                    };
                    acc += kernel.weight(di, dj) * image[(si, sj)];
                }
            }
            out[(i as usize, j as usize)] = acc;
        }
    }
    Ok(out)
}

/// Exact adjoint of [`convolve`]: the transpose scatter of the same gather,
/// using the same boundary resolution.
pub fn convolve_adjoint(
    image: &DenseMatrix,
    kernel: &Kernel2D,
    boundary: BoundaryRule,
) -> Result<DenseMatrix> {
    let (m1, m2) = (image.rows(), image.cols());
    check_kernel_fits(kernel, m1, m2)?;
    let r = kernel.radius() as isize;
    let mut out = DenseMatrix::zeros(m1, m2);
    for i in 0..m1 as isize {
        for j in 0..m2 as isize {
            let y = image[(i as usize, j as usize)];
            if y == 0.0 {
                continue;
            }
            for di in -r..=r {
                let Some(si) = resolve(i - di, m1, boundary) else {
                    continue;
                };
                for dj in -r..=r {
                    let Some(sj) = resolve(j - dj, m2, boundary) else {
                        continue;
                    };
                    out[(si, sj)] += kernel.weight(di, dj) * y;
                }
            }
        }
    }
    Ok(out)
}

/// The convolution as a [`LinearMap`] on row-major flattened images.
pub fn convolution_operator(
    m1: usize,
    m2: usize,
    kernel: Kernel2D,
    boundary: BoundaryRule,
) -> Result<LinearMap> {
    check_kernel_fits(&kernel, m1, m2)?;
    let k1 = kernel.clone();
    Ok(LinearMap::new(
        m1 * m2,
        m1 * m2,
        move |x: &[f64]| {
            let img = DenseMatrix::from_vec(m1, m2, x.to_vec()).expect("shape checked");
            convolve(&img, &k1, boundary).expect("radius checked").data().to_vec()
        },
        move |y: &[f64]| {
            let img = DenseMatrix::from_vec(m1, m2, y.to_vec()).expect("shape checked");
            convolve_adjoint(&img, &kernel, boundary)
                .expect("radius checked")
                .data()
                .to_vec()
        },
    ))
}

/// Sampled Gaussian kernel `g(x) = exp(-x'x / (2 sigma^2)) / (2 pi sigma^2)`
/// at integer offsets, normalized to unit sum so constant images are
/// preserved (the continuous normalization does not survive truncation).
pub fn gaussian_kernel(sigma: f64, radius: usize) -> Result<Kernel2D> {
    if sigma <= 0.0 {
        return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
    }
    let side = 2 * radius + 1;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * sigma * sigma);
    let mut weights = Vec::with_capacity(side * side);
    for di in -(radius as isize)..=(radius as isize) {
        for dj in -(radius as isize)..=(radius as isize) {
            let sq = (di * di + dj * dj) as f64;
            weights.push(norm * (-sq / (2.0 * sigma * sigma)).exp());
        }
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Kernel2D::new(radius, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::assert_adjoint_identity;
    use crate::rng::CounterRng;

    #[test]
    fn delta_kernel_is_identity() {
        let mut rng = CounterRng::new(4);
        let img = DenseMatrix::from_vec(5, 4, rng.uniform_vec(20, -1.0, 1.0)).unwrap();
        for boundary in [BoundaryRule::Zero, BoundaryRule::Circular, BoundaryRule::Reflect] {
            let out = convolve(&img, &Kernel2D::delta(1), boundary).unwrap();
            assert_eq!(out, img);
        }
    }

    #[test]
    fn zero_image_stays_zero() {
        let img = DenseMatrix::zeros(4, 4);
        let k = gaussian_kernel(1.0, 1).unwrap();
        let out = convolve(&img, &k, BoundaryRule::Zero).unwrap();
        assert!(out.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn ones_kernel_counts_neighbors() {
        // 3x3 ones image, 3x3 ones kernel, zero boundary: the output counts
        // in-range neighbors -- 9 at the center, 6 on edges, 4 in corners.
        let img = DenseMatrix::from_vec(3, 3, vec![1.0; 9]).unwrap();
        let k = Kernel2D::new(1, vec![1.0; 9]).unwrap();
        let out = convolve(&img, &k, BoundaryRule::Zero).unwrap();
        let want = [4.0, 6.0, 4.0, 6.0, 9.0, 6.0, 4.0, 6.0, 4.0];
        assert_eq!(out.data(), want);
    }

    #[test]
    fn oversized_kernel_rejected() {
        let img = DenseMatrix::zeros(3, 3);
        let k = Kernel2D::new(3, vec![0.0; 49]).unwrap();
        assert!(convolve(&img, &k, BoundaryRule::Zero).is_err());
    }

    #[test]
    fn linearity_in_the_image() {
        let mut rng = CounterRng::new(6);
        let k = gaussian_kernel(0.8, 2).unwrap();
        let u = DenseMatrix::from_vec(6, 6, rng.uniform_vec(36, -1.0, 1.0)).unwrap();
        let w = DenseMatrix::from_vec(6, 6, rng.uniform_vec(36, -1.0, 1.0)).unwrap();
        let (alpha, beta) = (0.7, -1.3);
        let mixed = DenseMatrix::from_vec(
            6,
            6,
            u.data()
                .iter()
                .zip(w.data())
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        )
        .unwrap();
        let lhs = convolve(&mixed, &k, BoundaryRule::Reflect).unwrap();
        let cu = convolve(&u, &k, BoundaryRule::Reflect).unwrap();
        let cw = convolve(&w, &k, BoundaryRule::Reflect).unwrap();
        for ((l, a), b) in lhs.data().iter().zip(cu.data()).zip(cw.data()) {
            assert!((l - (alpha * a + beta * b)).abs() <= 1e-12);
        }
    }

    #[test]
    fn gaussian_kernel_symmetric_and_normalized() {
        let k = gaussian_kernel(1.5, 3).unwrap();
        let r = k.radius() as isize;
        for di in -r..=r {
            for dj in -r..=r {
                assert_eq!(k.weight(di, dj), k.weight(-di, -dj));
            }
        }
        assert!((k.sum() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn gaussian_center_to_edge_ratio() {
        // Before normalization the ratio g(0,0)/g(1,0) is exp(1/(2 sigma^2));
        // normalization cancels in the quotient.
        let k = gaussian_kernel(1.0, 1).unwrap();
        let ratio = k.weight(0, 0) / k.weight(1, 0);
        assert!((ratio - 0.5_f64.exp()).abs() <= 1e-10);
    }

    #[test]
    fn gaussian_rejects_nonpositive_sigma() {
        assert!(gaussian_kernel(0.0, 1).is_err());
        assert!(gaussian_kernel(-1.0, 1).is_err());
    }

    #[test]
    fn operator_adjoint_identity_each_boundary() {
        let k = gaussian_kernel(1.0, 2).unwrap();
        for (boundary, seed) in [
            (BoundaryRule::Zero, 41),
            (BoundaryRule::Circular, 42),
            (BoundaryRule::Reflect, 43),
        ] {
            let op = convolution_operator(7, 6, k.clone(), boundary).unwrap();
            assert_adjoint_identity(&op, 100, seed);
        }
    }

    #[test]
    fn circular_wraps_mass_around() {
        // A single spike convolved with a flat kernel keeps total mass under
        // circular boundary.
        let mut img = DenseMatrix::zeros(4, 4);
        img[(0, 0)] = 1.0;
        let k = Kernel2D::new(1, vec![1.0 / 9.0; 9]).unwrap();
        let out = convolve(&img, &k, BoundaryRule::Circular).unwrap();
        let mass: f64 = out.data().iter().sum();
        assert!((mass - 1.0).abs() <= 1e-12);
    }
}
