//! Fourier-basis numerical homogenization of diffusion coefficients.
//!
//! A coefficient `a(x)` multiplying `∂u` turns into a convolution in Fourier
//! space that couples every wavenumber. This crate eliminates the fine
//! wavenumbers of that convolution exactly (a Schur complement over the fine
//! block) and keeps the diagonal of what remains as an effective coarse
//! coefficient: a scalar field in 1D and a 2x2 tensor field in 2D.
//!
//! The pieces:
//!
//! - [`spectral_ops`]: unitary FFT, coarse/fine projections and derivative symbols.
//! - [`coefficients`]: periodic two-phase, band-limited random and sparse-annulus fields.
//! - [`homogenize1d`]: kernel `Ā(x, x')`, its diagonal `ā(x)`, raw filtering, off-diagonal mass.
//! - [`homogenize2d`]: block decomposition and the four tensor components.
//! - [`solvers`]: exact 1D diffusion solution and a 2D finite-difference solver.
//! - [`experiments`]: bandwidth sweeps, kernel sweeps and 2D panels written as CSV.

pub mod coefficients;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod homogenize1d;
pub mod homogenize2d;
mod linalg;
pub mod solvers;
pub mod spectral_ops;

pub use coefficients::{CoefficientField, Provenance};
pub use error::{HomogError, Result};
pub use grid::GridSpec;
pub use homogenize1d::{HomogenizedCoefficient1D, HomogenizedKernel};
pub use homogenize2d::{Basis2D, TensorCoefficient2D};
pub use linalg::{CONDITION_LIMIT, SOLVE_TOLERANCE};
pub use spectral_ops::ProjectionBasis;
