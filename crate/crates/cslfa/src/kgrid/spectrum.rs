//! Spectrum-based Krylov convergence analyses of the preconditioned
//! iteration matrix: the half-plane condition and the ellipse-based
//! convergence-factor estimate.

use super::assembly::preconditioned_eigenmatrix;
use super::{CyclePlan, KGridError, KGridPlan, Smoother, THETA_SAMPLES_1D, THETA_SAMPLES_2D};
use crate::linalg::eigenvalues;
use crate::symbols::{Dimension, Frequency};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Base frequencies of the modes actually present on the Dirichlet grid of
/// the plan's size: theta0 = 2^(k-2) * m * pi / N with theta0 in the base
/// cell, so that every frequency in the splitting tree is a grid mode.
///
/// The preconditioned-spectrum analyses feed comparisons against actual
/// finite-grid solves, so they sample the finite problem's spectrum rather
/// than the continuous frequency cell; the continuous cell contains
/// near-resonant modes between the grid frequencies that no finite solve
/// ever sees.
fn dirichlet_bases(plan: &CyclePlan) -> Vec<Frequency> {
    let step = f64::from(1u32 << (plan.levels - 2)) * PI / f64::from(plan.finest_n);
    let m_max = plan.finest_n >> (plan.levels - 1);
    match plan.dimension {
        Dimension::One => (1..=m_max)
            .map(|m| Frequency::One(f64::from(m) * step))
            .collect(),
        Dimension::Two => (1..=m_max)
            .flat_map(|m1| {
                (1..=m1).map(move |m2| {
                    Frequency::Two(f64::from(m1) * step, f64::from(m2) * step)
                })
            })
            .collect(),
    }
}

/// All eigenvalues of the preconditioned iteration eigenmatrix
/// `K = A(sigma) (I - M^mu) A(sigma_tilde)^-1` over the Dirichlet-grid
/// base frequencies.
pub fn preconditioned_spectrum(plan: &KGridPlan, mu: u32) -> Result<Vec<Complex64>, KGridError> {
    plan.validate()?;
    let per_sample: Vec<Vec<Complex64>> = dirichlet_bases(&plan.cycle)
        .par_iter()
        .map(|&theta| {
            let k = preconditioned_eigenmatrix(plan, theta, mu)?;
            Ok(eigenvalues(&k)?.eigenvalues)
        })
        .collect::<Result<_, KGridError>>()?;
    Ok(per_sample.into_iter().flatten().collect())
}

/// Half-plane condition: the sampled spectrum of `K` fits inside an open
/// half-plane through the origin. Equivalent to the largest circular gap
/// between eigenvalue arguments exceeding pi (strictly, since the
/// half-plane is open). A resonant assembly at `beta = 0` fails the
/// condition outright.
pub fn half_plane_holds(plan: &KGridPlan, mu: u32) -> Result<bool, KGridError> {
    let spectrum = match preconditioned_spectrum(plan, mu) {
        Ok(s) => s,
        Err(KGridError::Resonant) => return Ok(false),
        Err(e) => return Err(e),
    };
    let mut angles = Vec::with_capacity(spectrum.len());
    for z in spectrum {
        if z.norm() == 0.0 {
            // The origin belongs to no open half-plane.
            return Ok(false);
        }
        angles.push(z.im.atan2(z.re));
    }
    if angles.is_empty() {
        return Err(KGridError::EmptySpectrum);
    }
    angles.sort_by(f64::total_cmp);
    let mut max_gap = angles[0] + 2.0 * PI - angles[angles.len() - 1];
    for w in angles.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    Ok(max_gap > PI)
}

/// Smallest shift for which the half-plane condition holds. Lies below the
/// iteration-based `beta_min` curve: the condition is sufficient for
/// preconditioned Krylov convergence and ignores multigrid stability.
///
/// Unlike the amplification criterion, the half-plane condition is not
/// monotone in the shift (the spectrum rides the `+-pi/2` boundary as the
/// cycle part decays), so a plain doubling bracket can step over the
/// satisfied region. The search scans a shift grid for the first satisfied
/// point and then bisects against the last unsatisfied one, preserving the
/// bracket-validity invariant.
pub fn hpc_min_beta(plan: &CyclePlan, sigma: f64, mu: u32) -> Result<f64, KGridError> {
    plan.validate()?;
    if !(sigma < 0.0) {
        return Err(KGridError::InvalidSigma(sigma));
    }
    if mu == 0 {
        return Err(KGridError::InvalidPlan {
            reason: "mu (inner multigrid cycles) must be at least 1",
        });
    }
    let holds = |beta: f64| half_plane_holds(&plan.with_shift(sigma, beta), mu);
    // Scan: fine up to 1, coarser up to 4, then doubling to the cap.
    let mut scan = Vec::new();
    scan.extend((0..=50).map(|i| 0.02 * f64::from(i)));
    scan.extend((11..=40).map(|i| 0.1 * f64::from(i)));
    scan.extend([8.0, 16.0, 32.0, 64.0]);
    let mut last_failed = None;
    let mut first_ok = None;
    for &beta in &scan {
        if holds(beta)? {
            first_ok = Some(beta);
            break;
        }
        last_failed = Some(beta);
    }
    let hi = first_ok.ok_or(KGridError::BracketExhausted { beta_hi: 64.0 })?;
    let mut lo = match last_failed {
        None => return Ok(0.0),
        Some(b) => b,
    };
    let mut hi = hi;
    let mut steps = 0;
    while steps < 10 || (hi - lo) >= super::search::BETA_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
    }
    Ok(hi)
}

/// An axis-aligned ellipse with real center, described by its semi-axes.
///
/// In the focal notation `E(c, d, a)` the foci sit at `c +- d` on the real
/// axis when the real semi-axis dominates; for spectra elongated along the
/// imaginary direction the focal distance is imaginary (`d^2 < 0`) and the
/// classical convergence-factor expression stays real-valued. Storing the
/// two semi-axes keeps both orientations in one representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseParams {
    pub center: f64,
    /// Semi-axis along the real direction.
    pub semi_real: f64,
    /// Semi-axis along the imaginary direction.
    pub semi_imag: f64,
}

impl EllipseParams {
    /// Construct from the focal notation: foci on the real axis at
    /// `center +- focal_distance`, major semi-axis `semi_major` along the
    /// real direction.
    pub fn from_foci(center: f64, focal_distance: f64, semi_major: f64) -> Self {
        debug_assert!(semi_major >= focal_distance);
        Self {
            center,
            semi_real: semi_major,
            semi_imag: (semi_major * semi_major - focal_distance * focal_distance).sqrt(),
        }
    }

    pub fn semi_major(&self) -> f64 {
        self.semi_real.max(self.semi_imag)
    }

    pub fn focal_distance(&self) -> f64 {
        self.d_squared().abs().sqrt()
    }

    /// Signed square of the focal distance: negative for ellipses with
    /// foci on the vertical line through the center.
    fn d_squared(&self) -> f64 {
        self.semi_real * self.semi_real - self.semi_imag * self.semi_imag
    }

    /// Containment with a small relative slack for the boundary.
    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        let x = z.re - self.center;
        let y = z.im;
        if self.semi_real == 0.0 {
            return x.abs() <= slack && y.abs() <= self.semi_imag * (1.0 + slack);
        }
        if self.semi_imag == 0.0 {
            return y.abs() <= slack && x.abs() <= self.semi_real * (1.0 + slack);
        }
        (x / self.semi_real).powi(2) + (y / self.semi_imag).powi(2) <= 1.0 + slack
    }

    /// Whether the origin lies strictly outside.
    pub fn excludes_origin(&self) -> bool {
        self.center.abs() > self.semi_real
    }
}

/// Fit an enclosing axis-aligned ellipse with real center to a spectrum,
/// origin excluded.
///
/// The center is the midpoint of the real extent. The fit sweeps the
/// one-parameter family of imaginary semi-axes `b_y` (from just above the
/// largest imaginary part); for each, the smallest containing real
/// semi-axis is `b_x(b_y) = max |Re z - c| / sqrt(1 - (Im z / b_y)^2)`.
/// Among the members that exclude the origin (`b_x < |c|`), the one
/// minimizing the convergence-factor estimate is returned. Fails when the
/// spectrum reaches around the origin, where no such ellipse exists.
pub fn fit_spectrum_ellipse(spectrum: &[Complex64]) -> Result<EllipseParams, KGridError> {
    if spectrum.is_empty() {
        return Err(KGridError::EmptySpectrum);
    }
    let (min_re, max_re) = spectrum
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| {
            (lo.min(z.re), hi.max(z.re))
        });
    let center = 0.5 * (min_re + max_re);
    let half_spread = 0.5 * (max_re - min_re);
    let max_im = spectrum.iter().map(|z| z.im.abs()).fold(0.0, f64::max);

    if max_im == 0.0 {
        // Real spectrum: the degenerate (segment) ellipse.
        return Ok(EllipseParams {
            center,
            semi_real: half_spread * (1.0 + 1e-12) + 1e-300,
            semi_imag: 0.0,
        });
    }

    let semi_real_for = |b_y: f64| -> f64 {
        spectrum
            .iter()
            .map(|z| {
                let x = (z.re - center).abs();
                let t = 1.0 - (z.im / b_y).powi(2);
                if t <= 0.0 {
                    f64::INFINITY
                } else {
                    x / t.sqrt()
                }
            })
            .fold(half_spread, f64::max)
    };

    let mut best: Option<(f64, EllipseParams)> = None;
    // b_y sweeps from barely containing the imaginary extent upward; the
    // grid is denser near the lower end where the estimate varies fastest.
    for i in 0..600 {
        let b_y = max_im * (1.0 + 1e-9) * (1.0 + 1e-4 * f64::from(i * i));
        let b_x = semi_real_for(b_y) * (1.0 + 1e-12);
        if !b_x.is_finite() || b_x >= center.abs() {
            continue; // origin not excluded (or no finite containment)
        }
        let params = EllipseParams {
            center,
            semi_real: b_x,
            semi_imag: b_y,
        };
        let rho = estimate_value(&params);
        if best.as_ref().map_or(true, |(r, _)| rho < *r) {
            best = Some((rho, params));
        }
    }
    best.map(|(_, p)| p).ok_or(KGridError::EstimateInvalid {
        reason: "no origin-excluding enclosing ellipse with real center exists",
    })
}

/// `(b_x + b_y) / (|c| + sqrt(c^2 - d^2))` with the signed `d^2`; reduces
/// to the focal form `(a + sqrt(a^2 - d^2)) / (c + sqrt(c^2 - d^2))` for
/// real foci, and stays real for imaginary ones.
fn estimate_value(e: &EllipseParams) -> f64 {
    let c = e.center.abs();
    (e.semi_real + e.semi_imag) / (c + (c * c - e.d_squared()).sqrt())
}

/// Heuristic convergence-factor estimate from an enclosing ellipse
/// `E(c, d, a)` that excludes the origin:
/// `rho = (a + sqrt(a^2 - d^2)) / (|c| + sqrt(c^2 - d^2))`.
///
/// Requires the ellipse to contain every spectrum point and to exclude the
/// origin; it is generally *not* sharp for indefinite problems, where the
/// spectrum covers only a sliver of any enclosing ellipse.
pub fn ellipse_rho_estimate(
    spectrum: &[Complex64],
    ellipse: &EllipseParams,
) -> Result<f64, KGridError> {
    if spectrum.is_empty() {
        return Err(KGridError::EmptySpectrum);
    }
    if ellipse.semi_real < 0.0 || ellipse.semi_imag < 0.0 {
        return Err(KGridError::EstimateInvalid {
            reason: "semi-axes must be non-negative",
        });
    }
    if !ellipse.excludes_origin() {
        return Err(KGridError::EstimateInvalid {
            reason: "origin inside the enclosing ellipse",
        });
    }
    if spectrum.iter().any(|z| !ellipse.contains(*z, 1e-9)) {
        return Err(KGridError::EstimateInvalid {
            reason: "spectrum point outside the ellipse",
        });
    }
    Ok(estimate_value(ellipse))
}

/// Exact spectrum of the exactly CSL-preconditioned Dirichlet problem.
///
/// On the Dirichlet grid the sine modes diagonalize both the unshifted and
/// the shifted operator simultaneously, so the preconditioned operator's
/// eigenvalues are exactly the pointwise symbol ratios
/// `A(theta; sigma) / A(theta; sigma_tilde)` at the grid frequencies
/// `theta = m*pi/N`. The ratios lie on the circle through 0 and 1 of
/// radius 1/2; for indefinite wavenumbers the near-resonant modes pinch
/// the spectrum toward the origin, which is what makes any enclosing
/// origin-excluding ellipse marginal and the convergence-factor estimate
/// non-sharp.
pub fn exact_csl_spectrum(
    dimension: Dimension,
    finest_n: u32,
    sigma: f64,
    beta: f64,
) -> Vec<Complex64> {
    use crate::symbols::{discretization, GridLevel, Shift};
    let level = GridLevel::finest(finest_n);
    let unshifted = Shift::unshifted(sigma);
    let shifted = Shift::new(sigma, beta);
    let ratio = |theta: Frequency| {
        discretization(theta, level, unshifted) / discretization(theta, level, shifted)
    };
    let step = PI / f64::from(finest_n);
    match dimension {
        Dimension::One => (1..finest_n)
            .map(|m| ratio(Frequency::One(f64::from(m) * step)))
            .collect(),
        Dimension::Two => (1..finest_n)
            .flat_map(|m1| {
                (1..finest_n)
                    .map(move |m2| ratio(Frequency::Two(f64::from(m1) * step, f64::from(m2) * step)))
            })
            .collect(),
    }
}
