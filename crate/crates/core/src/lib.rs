//! Inverse-problems workbench.
//!
//! The crate is organized along the pipeline of a linear inverse problem
//! `f = A u + noise`:
//!
//! - [`linop`]: matrix-free linear operators, dense matrices, an in-house
//!   Jacobi SVD, and operator-norm / condition diagnostics.
//! - [`forward`]: discrete forward operators (integration/differentiation,
//!   convolution, Radon transform) and the image gradient/divergence pair.
//! - [`spectral`]: generalized inverse, Picard diagnostics, spectral filter
//!   families (Tikhonov, TSVD, learned), and Morozov's discrepancy principle.
//! - [`prox`]: closed-form proximal operators and an orthogonal Haar
//!   transform for sparsity in a transformed basis.
//! - [`solve`]: first-order solvers (GD, CG, proximal point, PGD/ISTA,
//!   Chambolle-Pock, ADMM, plug-and-play PGD) with iteration logging.
//! - [`learn`]: dense networks with backprop, minibatch SGD, and the
//!   trainable spectral reconstruction model.
//! - [`harness`]: phantoms, noise, metrics, PGM/CSV output, and the CLI
//!   experiment drivers.

pub mod error;
pub mod forward;
pub mod harness;
pub mod learn;
pub mod linop;
pub mod prox;
pub mod rng;
pub mod solve;
pub mod spectral;

pub use error::{Error, Result};
