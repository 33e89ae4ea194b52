//! Local Fourier analysis and solver validation for complex shifted
//! Laplacian (CSL) multigrid preconditioning of the Helmholtz equation.
//!
//! The Helmholtz operator `-laplace + sigma` with `sigma = -k^2 < 0` is
//! indefinite, and multigrid applied to it directly diverges. The CSL
//! preconditioner replaces the wavenumber by `sigma*(1 + i*beta)`; the
//! complex shift `beta` stabilizes multigrid at the cost of preconditioning
//! quality. This crate computes the *minimal* shift `beta_min(sigma)` --
//! the smallest shift for which a k-grid cycle contracts every Fourier
//! mode -- and validates it against actual multigrid and Krylov solves.
//!
//! - [`symbols`]: Fourier symbols of the cycle components.
//! - [`linalg`]: small dense complex eigenproblems and LU solves.
//! - [`kgrid`]: harmonic spaces, k-grid eigenmatrices, amplification
//!   factors, the `beta_min` search, and spectrum-based Krylov bounds.
//! - [`multigrid`]: actual grid-level cycles and measured convergence
//!   factors.
//! - [`krylov`]: GMRES and BiCGStab with CSL multigrid preconditioning.
//!
//! The [`guide`] module mirrors the chapters of the mdbook under `book/`;
//! its examples double as doc-tests.

pub mod kgrid;
pub mod krylov;
pub mod multigrid;
pub mod linalg;
pub mod symbols;

pub use symbols::{Dimension, Frequency, GridLevel, Shift};
