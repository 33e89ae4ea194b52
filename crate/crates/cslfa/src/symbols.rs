//! Fourier symbols of the multigrid component operators.
//!
//! Local Fourier analysis treats every operator of the cycle as acting on
//! the modes `exp(i*theta*x/h)` of an infinite equidistant grid; the symbol
//! of an operator is its formal eigenvalue on that mode. This module is a
//! pure formula library: the second-order finite difference discretization
//! of the shifted Helmholtz operator, full weighting restriction, linear
//! interpolation, weighted Jacobi and (in 1D) lexicographic Gauss-Seidel.
//!
//! All symbols are 2*pi-periodic in each frequency component, restriction
//! and interpolation share one expression, and the complex shift enters the
//! discretization symbol additively. When scaled by `h^2` every symbol
//! depends on the wavenumber and the mesh only through the product
//! `sigma*h^2`, which is what makes the minimal shift invariant under
//! simultaneous `(sigma, N) -> (4*sigma, 2*N)` scaling.

use num_complex::Complex64;
use thiserror::Error;

/// Denominators with modulus below this are treated as exact poles of the
/// symbol: the evaluation reports a resonance instead of dividing.
pub const RESONANCE_EPS: f64 = 1e-14;

/// Spatial dimension of the model problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    One,
    Two,
}

impl Dimension {
    pub fn as_usize(self) -> usize {
        match self {
            Dimension::One => 1,
            Dimension::Two => 2,
        }
    }

    /// Number of harmonics that alias onto one coarse mode per coarsening.
    pub fn harmonics_per_split(self) -> usize {
        match self {
            Dimension::One => 2,
            Dimension::Two => 4,
        }
    }
}

/// The complex-shifted wavenumber of the preconditioning operator:
/// `sigma_tilde = sigma * (1 + i*beta)` with `sigma < 0` and `beta >= 0`.
/// The real shift is permanently fixed at one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shift {
    pub sigma: f64,
    pub beta: f64,
}

impl Shift {
    pub fn new(sigma: f64, beta: f64) -> Self {
        Self { sigma, beta }
    }

    /// Unshifted wavenumber (`beta = 0`).
    pub fn unshifted(sigma: f64) -> Self {
        Self { sigma, beta: 0.0 }
    }

    pub fn sigma_tilde(&self) -> Complex64 {
        Complex64::new(self.sigma, self.sigma * self.beta)
    }
}

/// A Fourier frequency: one angle per spatial dimension, each in (-pi, pi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frequency {
    One(f64),
    Two(f64, f64),
}

impl Frequency {
    pub fn dimension(self) -> Dimension {
        match self {
            Frequency::One(_) => Dimension::One,
            Frequency::Two(_, _) => Dimension::Two,
        }
    }

    pub fn components(self) -> Vec<f64> {
        match self {
            Frequency::One(t) => vec![t],
            Frequency::Two(t1, t2) => vec![t1, t2],
        }
    }

    /// Normalize every component into (-pi, pi].
    pub fn normalized(self) -> Frequency {
        match self {
            Frequency::One(t) => Frequency::One(normalize_angle(t)),
            Frequency::Two(t1, t2) => Frequency::Two(normalize_angle(t1), normalize_angle(t2)),
        }
    }

    /// Componentwise scaling, e.g. halving when descending the splitting tree.
    pub fn scaled(self, factor: f64) -> Frequency {
        match self {
            Frequency::One(t) => Frequency::One(t * factor),
            Frequency::Two(t1, t2) => Frequency::Two(t1 * factor, t2 * factor),
        }
    }

    fn cos_sum(self) -> f64 {
        match self {
            Frequency::One(t) => t.cos(),
            Frequency::Two(t1, t2) => t1.cos() + t2.cos(),
        }
    }
}

pub fn normalize_angle(mut t: f64) -> f64 {
    while t > std::f64::consts::PI {
        t -= 2.0 * std::f64::consts::PI;
    }
    while t <= -std::f64::consts::PI {
        t += 2.0 * std::f64::consts::PI;
    }
    t
}

/// Geometry of one level of the grid hierarchy: the finest grid has `N`
/// intervals (mesh width `1/N` on the unit domain) and each coarsening
/// doubles the mesh width, so level `l` (1-based, finest first) has
/// `h_l = 2^(l-1) / N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridLevel {
    pub level: u32,
    pub finest_n: u32,
}

impl GridLevel {
    pub fn new(level: u32, finest_n: u32) -> Self {
        debug_assert!(level >= 1);
        debug_assert!(finest_n.is_power_of_two());
        Self { level, finest_n }
    }

    pub fn finest(finest_n: u32) -> Self {
        Self::new(1, finest_n)
    }

    pub fn coarser(&self) -> GridLevel {
        Self::new(self.level + 1, self.finest_n)
    }

    pub fn mesh_width(&self) -> f64 {
        f64::from(1u32 << (self.level - 1)) / f64::from(self.finest_n)
    }

    /// Number of grid intervals per dimension on this level.
    pub fn points(&self) -> u32 {
        self.finest_n >> (self.level - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("fourier symbol at a resonance: denominator modulus {modulus:.3e} below {RESONANCE_EPS:.0e}")]
pub struct Resonance {
    pub modulus: f64,
}

/// Evaluated symbols of all component operators at one frequency.
#[derive(Debug, Clone, Copy)]
pub struct SymbolSet {
    pub discretization: Complex64,
    pub restriction: Complex64,
    pub interpolation: Complex64,
    pub smoother: Complex64,
}

impl SymbolSet {
    /// Evaluate all symbols for a weighted Jacobi smoother.
    pub fn jacobi(
        freq: Frequency,
        level: GridLevel,
        shift: Shift,
        omega: f64,
    ) -> Result<SymbolSet, Resonance> {
        let transfer = restriction(freq);
        Ok(SymbolSet {
            discretization: discretization(freq, level, shift),
            restriction: transfer.into(),
            interpolation: transfer.into(),
            smoother: jacobi(freq, level, shift, omega)?,
        })
    }
}

/// Symbol of the second-order finite difference discretization of
/// `-laplace + sigma_tilde`:
/// `-(2/h^2) cos(theta) + 2/h^2 + sigma_tilde` in 1D and
/// `-(2/h^2)(cos(theta1) + cos(theta2)) + 4/h^2 + sigma_tilde` in 2D.
pub fn discretization(freq: Frequency, level: GridLevel, shift: Shift) -> Complex64 {
    let h = level.mesh_width();
    let inv_h2 = 1.0 / (h * h);
    let d = freq.dimension().as_usize() as f64;
    Complex64::new(2.0 * inv_h2 * (d - freq.cos_sum()), 0.0) + shift.sigma_tilde()
}

/// Symbol of full weighting restriction: `(cos(theta) + 1)/2` in 1D,
/// `(cos(theta1) cos(theta2) + cos(theta1) + cos(theta2) + 1)/4` in 2D.
/// Geometry-free: the expression does not involve the mesh width.
pub fn restriction(freq: Frequency) -> f64 {
    match freq {
        Frequency::One(t) => 0.5 * (t.cos() + 1.0),
        Frequency::Two(t1, t2) => {
            let (c1, c2) = (t1.cos(), t2.cos());
            0.25 * (c1 * c2 + c1 + c2 + 1.0)
        }
    }
}

/// Symbol of linear interpolation. Full weighting and linear interpolation
/// are dual operators with identical symbols.
pub fn interpolation(freq: Frequency) -> f64 {
    restriction(freq)
}

/// Symbol of the weighted Jacobi smoother `I - omega * D^-1 * A`:
/// `1 - omega + 2*omega*cos(theta) / (2 + sigma_tilde h^2)` in 1D and the
/// analogous expression with `4 + sigma_tilde h^2` in 2D.
pub fn jacobi(
    freq: Frequency,
    level: GridLevel,
    shift: Shift,
    omega: f64,
) -> Result<Complex64, Resonance> {
    let h = level.mesh_width();
    let d = freq.dimension().as_usize() as f64;
    let denom = Complex64::new(2.0 * d, 0.0) + shift.sigma_tilde() * h * h;
    if denom.norm() < RESONANCE_EPS {
        return Err(Resonance {
            modulus: denom.norm(),
        });
    }
    Ok(Complex64::new(1.0 - omega, 0.0) + 2.0 * omega * freq.cos_sum() / denom)
}

/// Symbol of lexicographic Gauss-Seidel relaxation in 1D:
/// `exp(i*theta) / (2 + sigma_tilde h^2 - exp(-i*theta))`.
///
/// Exposed for completeness; only the 1D variant exists here.
pub fn gauss_seidel(freq: Frequency, level: GridLevel, shift: Shift) -> Result<Complex64, Resonance> {
    let t = match freq {
        Frequency::One(t) => t,
        Frequency::Two(_, _) => panic!("gauss_seidel symbol is one-dimensional"),
    };
    let h = level.mesh_width();
    let denom =
        Complex64::new(2.0, 0.0) + shift.sigma_tilde() * h * h - Complex64::new(0.0, -t).exp();
    if denom.norm() < RESONANCE_EPS {
        return Err(Resonance {
            modulus: denom.norm(),
        });
    }
    Ok(Complex64::new(0.0, t).exp() / denom)
}
