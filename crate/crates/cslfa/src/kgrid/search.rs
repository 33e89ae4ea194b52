//! Frequency sweeps, the amplification factor, and the minimal-shift search.
//!
//! The base cell (-pi/2, pi/2]^d is sampled uniformly (1024 points in 1D,
//! 128x128 in 2D), offset by half a step so theta = 0 -- a pole of the
//! regularized Poisson limit -- is never evaluated exactly. For the Jacobi
//! smoother every symbol is an even function of each frequency component
//! and symmetric under component swap (checked by a test in `assembly`),
//! so the sweep only visits one half of the cell in 1D and one octant
//! triangle in 2D; Gauss-Seidel sweeps visit the full cell.
//!
//! `beta_min` brackets the convergence criterion `max_theta G <= 1` by
//! doubling the upper shift (start 1, at most six doublings) and then
//! bisects: at least ten steps and until the bracket is narrower than
//! 5e-4, giving three decimals. The bisection invariant is bracket
//! validity -- the lower endpoint always fails the criterion and the upper
//! endpoint satisfies it -- not any global monotonicity in beta.

use super::assembly::assemble_eigenmatrix;
use super::{CyclePlan, KGridError, KGridPlan, Smoother, THETA_SAMPLES_1D, THETA_SAMPLES_2D};
use crate::linalg::spectral_radius;
use crate::symbols::{Dimension, Frequency, GridLevel};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Bisection stops once the bracket is narrower than this (and at least
/// ten steps have run), pinning three decimals of `beta_min`.
pub(crate) const BETA_TOLERANCE: f64 = 5e-4;
const MAX_BRACKET_DOUBLINGS: u32 = 6;

/// Amplification factor `G(theta0, sigma, beta)`: the spectral radius of
/// the k-grid eigenmatrix. Resonant frequencies (poles at `beta = 0`)
/// report positive infinity so that sweeps stay total.
pub fn amplification_factor(plan: &KGridPlan, theta0: Frequency) -> Result<f64, KGridError> {
    match assemble_eigenmatrix(plan, theta0) {
        Ok(m) => Ok(spectral_radius(&m)?),
        Err(KGridError::Resonant) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

fn sample_1d(j: usize, count: usize) -> f64 {
    -PI / 2.0 + (j as f64 + 0.5) * PI / count as f64
}

/// Sample frequencies for the sweep, reduced by the Jacobi symmetries when
/// possible.
fn sweep_samples(plan: &CyclePlan) -> Vec<Frequency> {
    let jacobi = matches!(plan.smoother, Smoother::Jacobi { .. });
    match plan.dimension {
        Dimension::One => {
            let n = THETA_SAMPLES_1D;
            if jacobi {
                // Positive half; the grid mirrors exactly onto the negative half.
                (n / 2..n).map(|j| Frequency::One(sample_1d(j, n))).collect()
            } else {
                (0..n).map(|j| Frequency::One(sample_1d(j, n))).collect()
            }
        }
        Dimension::Two => {
            let n = THETA_SAMPLES_2D;
            debug_assert!(jacobi, "2D plans are Jacobi-only");
            // Positive quadrant, upper triangle including the diagonal.
            let mut v = Vec::with_capacity((n / 2) * (n / 2 + 1) / 2);
            for j1 in n / 2..n {
                for j2 in n / 2..=j1 {
                    v.push(Frequency::Two(sample_1d(j1, n), sample_1d(j2, n)));
                }
            }
            v
        }
    }
}

/// Maximum of the amplification factor over the sampled base cell.
pub fn max_amplification(plan: &KGridPlan) -> Result<f64, KGridError> {
    plan.validate()?;
    sweep_samples(&plan.cycle)
        .par_iter()
        .map(|&theta| amplification_factor(plan, theta))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

/// Whether `max_theta G <= 1` holds, with early exit on the first divergent
/// frequency. Cheap norm bounds on the eigenmatrix avoid most eigensolves:
/// any matrix norm dominates the spectral radius.
pub fn cycle_converges(plan: &KGridPlan) -> Result<bool, KGridError> {
    plan.validate()?;
    let divergent = sweep_samples(&plan.cycle)
        .par_iter()
        .find_map_any(|&theta| match frequency_diverges(plan, theta) {
            Ok(false) => None,
            Ok(true) => Some(Ok(())),
            Err(e) => Some(Err(e)),
        });
    match divergent {
        None => Ok(true),
        Some(Ok(())) => Ok(false),
        Some(Err(e)) => Err(e),
    }
}

fn frequency_diverges(plan: &KGridPlan, theta: Frequency) -> Result<bool, KGridError> {
    let m = match assemble_eigenmatrix(plan, theta) {
        Ok(m) => m,
        Err(KGridError::Resonant) => return Ok(true),
        Err(e) => return Err(e),
    };
    // |trace|/n is a lower bound for the spectral radius.
    let n = m.rows() as f64;
    if m.trace().norm() / n > 1.0 {
        return Ok(true);
    }
    if m.inf_norm().min(m.frobenius_norm()) <= 1.0 {
        return Ok(false);
    }
    Ok(spectral_radius(&m)? > 1.0)
}

/// Bracketed bisection for the smallest `beta >= 0` satisfying a
/// convergence predicate. Shared by the LFA search, the half-plane-condition
/// search and the experimental (measured-factor) search.
pub(crate) fn bisect_min_beta<E>(
    mut satisfied: impl FnMut(f64) -> Result<bool, E>,
    bracket_exhausted: impl FnOnce(f64) -> E,
) -> Result<f64, E> {
    if satisfied(0.0)? {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut doublings = 0;
    while !satisfied(hi)? {
        if doublings == MAX_BRACKET_DOUBLINGS {
            return Err(bracket_exhausted(hi));
        }
        lo = hi;
        hi *= 2.0;
        doublings += 1;
    }
    // Invariant: lo fails the criterion, hi satisfies it.
    let mut steps = 0;
    while steps < 10 || (hi - lo) >= BETA_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if satisfied(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
    }
    Ok(hi)
}

/// The minimal complex shift: smallest `beta >= 0` with
/// `max_theta G(theta, sigma, beta) <= 1`.
pub fn beta_min(plan: &CyclePlan, sigma: f64) -> Result<f64, KGridError> {
    plan.validate()?;
    if !(sigma < 0.0) {
        return Err(KGridError::InvalidSigma(sigma));
    }
    bisect_min_beta(
        |beta| cycle_converges(&plan.with_shift(sigma, beta)),
        |beta_hi| KGridError::BracketExhausted { beta_hi },
    )
}

/// `beta_min` over a list of wavenumbers.
#[derive(Debug, Clone)]
pub struct BetaCurve {
    /// `(sigma, beta_min)` samples in input order.
    pub samples: Vec<(f64, f64)>,
    pub plan: CyclePlan,
}

pub fn beta_curve(plan: &CyclePlan, sigmas: &[f64]) -> Result<BetaCurve, KGridError> {
    plan.validate()?;
    let samples = sigmas
        .par_iter()
        .map(|&sigma| beta_min(plan, sigma).map(|b| (sigma, b)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BetaCurve {
        samples,
        plan: *plan,
    })
}

/// The two closed-form smoother-only lower limits on the shift (1D weighted
/// Jacobi), from requiring `|S(theta)| <= 1` at the two maximizers of the
/// unshifted smoother symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmootherBounds {
    /// Bound from `theta = 0` (smoothest mode); dominates for small `|sigma|`
    /// and diverges as `sigma -> 0`.
    pub smooth_mode: f64,
    /// Bound from `theta = pi` (most oscillatory mode); dominates for large
    /// `|sigma|`.
    pub oscillatory_mode: f64,
}

impl SmootherBounds {
    pub fn beta_min(&self) -> f64 {
        self.smooth_mode.max(self.oscillatory_mode)
    }
}

/// Closed-form smoother-only bounds at the given level.
///
/// With `s = sigma * h^2 < 0` and weight `omega`:
/// `beta >= sqrt(4 / ((omega - 2) s) - 1)` from `theta = 0`, and
/// `beta >= sqrt(-(omega (4+s)^2 - 2 (2+s)(4+s)) / ((omega - 2) s^2))`
/// from `theta = pi`. A bound whose square is negative is inactive (zero).
pub fn smoother_bounds(
    level: GridLevel,
    sigma: f64,
    omega: f64,
) -> Result<SmootherBounds, KGridError> {
    if !(sigma < 0.0) {
        return Err(KGridError::InvalidSigma(sigma));
    }
    let h = level.mesh_width();
    let s = sigma * h * h;
    let smooth_sq = 4.0 / ((omega - 2.0) * s) - 1.0;
    let osc_sq = -(omega * (4.0 + s).powi(2) - 2.0 * (2.0 + s) * (4.0 + s)) / ((omega - 2.0) * s * s);
    let active = |b_sq: f64| if b_sq > 0.0 { b_sq.sqrt() } else { 0.0 };
    Ok(SmootherBounds {
        smooth_mode: active(smooth_sq),
        oscillatory_mode: active(osc_sq),
    })
}

/// Minimal shift for the smoother alone: the smallest `beta` satisfying
/// both closed-form bounds.
pub fn smoother_beta_min(level: GridLevel, sigma: f64, omega: f64) -> Result<f64, KGridError> {
    Ok(smoother_bounds(level, sigma, omega)?.beta_min())
}

/// Frequency of the two-grid resonance (semi-asymptote) at `beta = 0`:
/// `+-asin(sqrt(-sigma h^2))`, the frequency where the real part of the
/// coarse discretization symbol vanishes. Only meaningful while
/// `|sigma| <= 1/h^2`; returns the positive branch.
pub fn resonance_frequency(level: GridLevel, sigma: f64) -> Option<f64> {
    if sigma >= 0.0 {
        return None;
    }
    let h = level.mesh_width();
    let arg = -sigma * h * h;
    if arg > 1.0 {
        return None;
    }
    Some(arg.sqrt().asin())
}
