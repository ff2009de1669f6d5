//! Ray-driven Radon transform with bilinear interpolation.
//!
//! The line with angle `phi` and signed offset `s` is parameterized as
//! `(x(t), y(t)) = (s cos(phi) + t sin(phi), s sin(phi) - t cos(phi))`, and
//! each measurement is the quadrature sum of image samples along it.
//! Quadrature nodes are equispaced with spacing `0.5 * min(h1, h2)` (exposed
//! as a parameter via [`radon_operator_with_step`]); the image is bilinearly
//! interpolated and treated as zero outside the grid. Forward and adjoint
//! enumerate the same (pixel, weight) pairs, so the pair is exactly adjoint.

use super::{Grid2D, Sinogram};
use crate::error::{Error, Result};
use crate::linop::{DenseMatrix, LinearMap};

/// Visit the bilinear stencil of point `(x, y)`; axis 1 of the grid is the x
/// coordinate. Weights sum to at most 1 (less when the point leaves the grid).
#[inline]
fn for_each_bilinear(grid: &Grid2D, x: f64, y: f64, mut visit: impl FnMut(usize, f64)) {
    let fx = (x - grid.a1) / grid.h1 - 0.5;
    let fy = (y - grid.a2) / grid.h2 - 0.5;
    let i0 = fx.floor();
    let j0 = fy.floor();
    let dx = fx - i0;
    let dy = fy - j0;
    let corners = [
        (i0, j0, (1.0 - dx) * (1.0 - dy)),
        (i0 + 1.0, j0, dx * (1.0 - dy)),
        (i0, j0 + 1.0, (1.0 - dx) * dy),
        (i0 + 1.0, j0 + 1.0, dx * dy),
    ];
    for (ci, cj, w) in corners {
        if w == 0.0 {
            continue;
        }
        if ci >= 0.0 && cj >= 0.0 && (ci as usize) < grid.m1 && (cj as usize) < grid.m2 {
            visit(ci as usize * grid.m2 + cj as usize, w);
        }
    }
}

/// Visit every (pixel, quadrature weight) pair of one ray.
fn for_each_ray_sample(
    grid: &Grid2D,
    angle: f64,
    offset: f64,
    step: f64,
    mut visit: impl FnMut(usize, f64),
) {
    let (sin_a, cos_a) = angle.sin_cos();
    // Rays are cut off at the grid's circumscribed circle.
    let half_w1 = grid.m1 as f64 * grid.h1 / 2.0;
    let half_w2 = grid.m2 as f64 * grid.h2 / 2.0;
    let t_max = (half_w1 * half_w1 + half_w2 * half_w2).sqrt();
    let n_steps = (2.0 * t_max / step).ceil() as usize;
    for k in 0..=n_steps {
        let t = -t_max + k as f64 * step;
        let x = offset * cos_a + t * sin_a;
        let y = offset * sin_a - t * cos_a;
        for_each_bilinear(grid, x, y, |pixel, w| visit(pixel, w * step));
    }
}

fn default_step(grid: &Grid2D) -> f64 {
    0.5 * grid.h1.min(grid.h2)
}

fn check_image(grid: &Grid2D, image: &DenseMatrix) -> Result<()> {
    if image.rows() != grid.m1 || image.cols() != grid.m2 {
        return Err(Error::dim(
            "radon: image vs grid",
            grid.m1 * grid.m2,
            image.rows() * image.cols(),
        ));
    }
    Ok(())
}

/// Line integrals of `image` for every (offset, angle) pair.
pub fn radon(
    image: &DenseMatrix,
    grid: &Grid2D,
    angles: &[f64],
    offsets: &[f64],
) -> Result<Sinogram> {
    check_image(grid, image)?;
    if angles.is_empty() || offsets.is_empty() {
        return Err(Error::EmptyInput("radon: angles/offsets"));
    }
    let step = default_step(grid);
    let mut values = Vec::with_capacity(angles.len() * offsets.len());
    for &angle in angles {
        for &offset in offsets {
            let mut acc = 0.0;
            for_each_ray_sample(grid, angle, offset, step, |pixel, w| {
                acc += w * image.data()[pixel];
            });
            values.push(acc);
        }
    }
    Sinogram::new(angles.to_vec(), offsets.to_vec(), values)
}

/// Backprojection: the exact adjoint of [`radon`] for the same grid and
/// discretization.
pub fn radon_adjoint(sino: &Sinogram, grid: &Grid2D) -> Result<DenseMatrix> {
    let step = default_step(grid);
    let mut out = vec![0.0; grid.len()];
    let mut idx = 0;
    for &angle in &sino.angles {
        for &offset in &sino.offsets {
            let v = sino.values[idx];
            idx += 1;
            if v == 0.0 {
                continue;
            }
            for_each_ray_sample(grid, angle, offset, step, |pixel, w| {
                out[pixel] += w * v;
            });
        }
    }
    DenseMatrix::from_vec(grid.m1, grid.m2, out)
}

/// The Radon transform as a [`LinearMap`] from flattened images to flattened
/// sinograms (angle-major, matching [`Sinogram::values`]).
pub fn radon_operator(grid: &Grid2D, angles: &[f64], offsets: &[f64]) -> Result<LinearMap> {
    radon_operator_with_step(grid, angles, offsets, default_step(grid))
}

/// [`radon_operator`] with an explicit quadrature spacing.
pub fn radon_operator_with_step(
    grid: &Grid2D,
    angles: &[f64],
    offsets: &[f64],
    step: f64,
) -> Result<LinearMap> {
    if angles.is_empty() || offsets.is_empty() {
        return Err(Error::EmptyInput("radon_operator: angles/offsets"));
    }
    if step <= 0.0 {
        return Err(Error::invalid("radon_operator: step must be positive"));
    }
    let rays: Vec<(f64, f64)> = angles
        .iter()
        .flat_map(|&a| offsets.iter().map(move |&s| (a, s)))
        .collect();
    let g = *grid;
    let rays_fwd = rays.clone();
    Ok(LinearMap::new(
        rays.len(),
        grid.len(),
        move |x: &[f64]| {
            rays_fwd
                .iter()
                .map(|&(angle, offset)| {
                    let mut acc = 0.0;
                    for_each_ray_sample(&g, angle, offset, step, |pixel, w| {
                        acc += w * x[pixel];
                    });
                    acc
                })
                .collect()
        },
        move |y: &[f64]| {
            let mut out = vec![0.0; g.len()];
            for (&(angle, offset), &v) in rays.iter().zip(y) {
                if v == 0.0 {
                    continue;
                }
                for_each_ray_sample(&g, angle, offset, step, |pixel, w| {
                    out[pixel] += w * v;
                });
            }
            out
        },
    ))
}
