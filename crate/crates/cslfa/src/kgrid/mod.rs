//! k-grid local Fourier analysis of the CSL multigrid cycle.
//!
//! For a multigrid cycle truncated to `k` levels (exact solve at the
//! coarsest), the error propagation operator leaves small spaces of
//! harmonic Fourier modes invariant. On such a space the cycle is a dense
//! `2^(k-1)` x `2^(k-1)` (1D) or `4^(k-1)` x `4^(k-1)` (2D) eigenmatrix
//! built from the component symbols. Its spectral radius is the
//! amplification factor `G(theta, sigma, beta)`; the minimal complex shift
//! `beta_min(sigma)` is the smallest `beta >= 0` for which
//! `max_theta G <= 1`.
//!
//! This module assembles those eigenmatrices for `k = 2, 3, 4` in one and
//! two dimensions, searches `beta_min` by bracketed bisection, provides the
//! closed-form smoother-only lower limits, and carries the
//! preconditioned-spectrum analyses (half-plane condition, ellipse-based
//! convergence-factor estimate) for the Krylov side.

mod assembly;
mod harmonics;
mod search;
mod spectrum;

pub use assembly::{assemble_eigenmatrix, preconditioned_eigenmatrix};
pub use harmonics::{harmonics, HarmonicSet};
pub use search::{
    amplification_factor, beta_curve, beta_min, cycle_converges, max_amplification,
    resonance_frequency, smoother_beta_min, smoother_bounds, BetaCurve, SmootherBounds,
};
pub use spectrum::{
    ellipse_rho_estimate, exact_csl_spectrum, fit_spectrum_ellipse, half_plane_holds,
    hpc_min_beta, preconditioned_spectrum, EllipseParams,
};

pub(crate) use search::bisect_min_beta;

use crate::linalg::LinalgError;
use crate::symbols::{Dimension, Shift};
use thiserror::Error;

/// Frequency samples over the 1D base cell (-pi/2, pi/2].
pub const THETA_SAMPLES_1D: usize = 1024;
/// Frequency samples per axis over the 2D base cell.
pub const THETA_SAMPLES_2D: usize = 128;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KGridError {
    #[error("invalid cycle plan: {reason}")]
    InvalidPlan { reason: &'static str },
    #[error("wavenumber sigma must be strictly negative, got {0}")]
    InvalidSigma(f64),
    #[error("frequency component {value} outside the base cell (-pi/2, pi/2]")]
    FrequencyOutOfRange { value: f64 },
    #[error("plan is {plan:?}-dimensional but the frequency is {freq:?}-dimensional")]
    DimensionMismatch { plan: Dimension, freq: Dimension },
    #[error("coarse-grid symbol is resonant at this frequency (pole of the analysis)")]
    Resonant,
    #[error("no beta <= {beta_hi} satisfies the convergence criterion")]
    BracketExhausted { beta_hi: f64 },
    #[error("spectrum is empty")]
    EmptySpectrum,
    #[error("ellipse estimate invalid: {reason}")]
    EstimateInvalid { reason: &'static str },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Smoother used inside the cycle. Gauss-Seidel is available in 1D only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoother {
    Jacobi { omega: f64 },
    GaussSeidel,
}

/// A k-grid cycle description without the wavenumber and shift: dimension,
/// level count, smoothing counts, smoother, and the finest grid size. This
/// is the metadata a `beta_min`-over-`sigma` curve is parametrized by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CyclePlan {
    pub dimension: Dimension,
    pub levels: u32,
    pub pre_smooth: u32,
    pub post_smooth: u32,
    pub smoother: Smoother,
    pub finest_n: u32,
}

impl CyclePlan {
    pub fn validate(&self) -> Result<(), KGridError> {
        let fail = |reason| Err(KGridError::InvalidPlan { reason });
        if !(2..=4).contains(&self.levels) {
            return fail("level count k must be 2, 3 or 4");
        }
        if self.pre_smooth + self.post_smooth == 0 {
            return fail("nu1 + nu2 must be at least 1: a cycle without smoothing is not multigrid");
        }
        if !self.finest_n.is_power_of_two() {
            return fail("finest grid size N must be a power of two");
        }
        if self.finest_n < (1 << self.levels) {
            return fail("finest grid size N too small for the requested level count");
        }
        if let Smoother::Jacobi { omega } = self.smoother {
            if !(0.0..=1.0).contains(&omega) {
                return fail("Jacobi weight omega must lie in [0, 1]");
            }
        }
        if matches!(self.smoother, Smoother::GaussSeidel) && self.dimension == Dimension::Two {
            return fail("Gauss-Seidel analysis is one-dimensional only");
        }
        Ok(())
    }

    pub fn with_shift(&self, sigma: f64, beta: f64) -> KGridPlan {
        KGridPlan {
            cycle: *self,
            shift: Shift::new(sigma, beta),
        }
    }

    /// Eigenmatrix dimension: `2^(k-1)` in 1D, `4^(k-1)` in 2D.
    pub fn eigenmatrix_dim(&self) -> usize {
        self.dimension.harmonics_per_split().pow(self.levels - 1)
    }
}

/// A fully specified k-grid analysis: cycle plus `(sigma, beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KGridPlan {
    pub cycle: CyclePlan,
    pub shift: Shift,
}

impl KGridPlan {
    pub fn validate(&self) -> Result<(), KGridError> {
        self.cycle.validate()
    }
}
