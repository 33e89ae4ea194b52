//! Assembly of the k-grid and preconditioned eigenmatrices.
//!
//! On the invariant space spanned by the `2^(k-1)` (1D) / `4^(k-1)` (2D)
//! fine-grid harmonics of a base frequency, the k-grid error propagation
//! operator is represented recursively, level by level:
//!
//! ```text
//! M_l = S_l^nu2 * [I - P (I - M_(l+1)) A_(l+1)^-1 R A_l] * S_l^nu1,
//! M_k = 0,
//! ```
//!
//! where every factor is evaluated through its Fourier symbol: `A_l` and
//! `S_l` are diagonal over the level-l harmonics, `A_(l+1)` is diagonal
//! over the coarse modes, and the transfer matrices `P` (interpolation) and
//! `R` (restriction) have one nonzero per fine mode, connecting it to the
//! coarse mode it aliases to. Inverting `A_(l+1)` is the source of the
//! resonance poles: a coarse symbol with modulus below the resonance
//! threshold makes the whole frequency a pole of the analysis.

use super::harmonics::frequency_tree;
use super::{KGridError, KGridPlan, Smoother};
use crate::linalg::CMatrix;
use crate::symbols::{
    self, discretization, restriction, Frequency, GridLevel, Shift, RESONANCE_EPS,
};
use num_complex::Complex64;

fn smoother_symbol(
    smoother: Smoother,
    freq: Frequency,
    level: GridLevel,
    shift: Shift,
) -> Result<Complex64, KGridError> {
    let value = match smoother {
        Smoother::Jacobi { omega } => symbols::jacobi(freq, level, shift, omega),
        Smoother::GaussSeidel => symbols::gauss_seidel(freq, level, shift),
    };
    value.map_err(|_| KGridError::Resonant)
}

fn check_frequency(plan: &KGridPlan, theta0: Frequency) -> Result<(), KGridError> {
    if theta0.dimension() != plan.cycle.dimension {
        return Err(KGridError::DimensionMismatch {
            plan: plan.cycle.dimension,
            freq: theta0.dimension(),
        });
    }
    Ok(())
}

/// The k-grid eigenmatrix of the cycle at base frequency `theta0`
/// (a level-(k-1) low frequency in the base cell).
///
/// For `k = 2` this reduces to the classical two-grid eigenmatrix
/// `S^nu2 [I - P A_2(2 theta)^-1 R A_1] S^nu1` on the harmonic pair (quad).
pub fn assemble_eigenmatrix(plan: &KGridPlan, theta0: Frequency) -> Result<CMatrix, KGridError> {
    plan.validate()?;
    check_frequency(plan, theta0)?;
    let lists = frequency_tree(plan.cycle.levels, theta0)?;
    assemble_level(plan, &lists, 0)
}

fn assemble_level(
    plan: &KGridPlan,
    lists: &[Vec<Frequency>],
    idx: usize,
) -> Result<CMatrix, KGridError> {
    let fine = &lists[idx];
    let coarse = &lists[idx + 1];
    let n = fine.len();
    let m = coarse.len();
    let split = plan.cycle.dimension.harmonics_per_split();
    debug_assert_eq!(n, m * split);

    let level = GridLevel::new(idx as u32 + 1, plan.cycle.finest_n);
    let coarse_level = level.coarser();
    let shift = plan.shift;

    let smoother: Vec<Complex64> = fine
        .iter()
        .map(|&f| smoother_symbol(plan.cycle.smoother, f, level, shift))
        .collect::<Result<_, _>>()?;
    let a_fine: Vec<Complex64> = fine
        .iter()
        .map(|&f| discretization(f, level, shift))
        .collect();
    let transfer: Vec<f64> = fine.iter().map(|&f| restriction(f)).collect();

    let mut inv_a_coarse = Vec::with_capacity(m);
    for &f in coarse {
        let a = discretization(f, coarse_level, shift);
        if a.norm() < RESONANCE_EPS {
            return Err(KGridError::Resonant);
        }
        inv_a_coarse.push(a.inv());
    }

    // X = (I - M_(l+1)) A_(l+1)^-1, with M_k = 0 at the deepest split.
    let mut x = if idx + 2 == lists.len() {
        CMatrix::identity(m)
    } else {
        CMatrix::identity(m).sub(&assemble_level(plan, lists, idx + 1)?)
    };
    for g in 0..m {
        x.scale_col(g, inv_a_coarse[g]);
    }

    // Coarse-grid correction I - P X R A_l, then smoothing on both sides.
    let mut matrix = CMatrix::from_fn(n, n, |i, j| {
        let mut v = -transfer[i] * x[(i / split, j / split)] * transfer[j] * a_fine[j];
        if i == j {
            v += 1.0;
        }
        v
    });
    for i in 0..n {
        if plan.cycle.post_smooth > 0 {
            matrix.scale_row(i, smoother[i].powu(plan.cycle.post_smooth));
        }
        if plan.cycle.pre_smooth > 0 {
            matrix.scale_col(i, smoother[i].powu(plan.cycle.pre_smooth));
        }
    }
    Ok(matrix)
}

/// Fourier representation of the right-preconditioned MG-Krylov iteration
/// matrix on the harmonic space:
/// `K = A_1(sigma) (I - M^mu) A_1(sigma_tilde)^-1`,
/// with `mu` inner multigrid cycles modeled as the `mu`-th power of the
/// cycle eigenmatrix.
pub fn preconditioned_eigenmatrix(
    plan: &KGridPlan,
    theta0: Frequency,
    mu: u32,
) -> Result<CMatrix, KGridError> {
    plan.validate()?;
    check_frequency(plan, theta0)?;
    let cycle_matrix = assemble_eigenmatrix(plan, theta0)?;
    let lists = frequency_tree(plan.cycle.levels, theta0)?;
    let fine = &lists[0];
    let level = GridLevel::finest(plan.cycle.finest_n);

    let unshifted = Shift::unshifted(plan.shift.sigma);
    let mut k = CMatrix::identity(fine.len()).sub(&cycle_matrix.pow(mu));
    for (i, &f) in fine.iter().enumerate() {
        let a_shifted = discretization(f, level, plan.shift);
        if a_shifted.norm() < RESONANCE_EPS {
            return Err(KGridError::Resonant);
        }
        k.scale_row(i, discretization(f, level, unshifted));
        k.scale_col(i, a_shifted.inv());
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kgrid::CyclePlan;
    use crate::linalg::spectral_radius;
    use crate::symbols::Dimension;
    use std::f64::consts::PI;

    fn plan_1d(levels: u32, sigma: f64, beta: f64) -> KGridPlan {
        CyclePlan {
            dimension: Dimension::One,
            levels,
            pre_smooth: 1,
            post_smooth: 0,
            smoother: Smoother::Jacobi { omega: 2.0 / 3.0 },
            finest_n: 64,
        }
        .with_shift(sigma, beta)
    }

    fn plan_2d(levels: u32, sigma: f64, beta: f64, n: u32) -> KGridPlan {
        CyclePlan {
            dimension: Dimension::Two,
            levels,
            pre_smooth: 1,
            post_smooth: 0,
            smoother: Smoother::Jacobi { omega: 2.0 / 3.0 },
            finest_n: n,
        }
        .with_shift(sigma, beta)
    }

    #[test]
    fn eigenmatrix_dimensions() {
        for k in 2..=4 {
            let m = assemble_eigenmatrix(&plan_1d(k, -100.0, 0.1), Frequency::One(0.4)).unwrap();
            assert_eq!(m.rows(), 2usize.pow(k - 1));
            let m2 =
                assemble_eigenmatrix(&plan_2d(k, -100.0, 0.1, 64), Frequency::Two(0.4, -0.3))
                    .unwrap();
            assert_eq!(m2.rows(), 4usize.pow(k - 1));
        }
    }

    /// Two-grid reduction: the recursive assembly at k=2 must equal a
    /// directly coded two-grid eigenmatrix entrywise.
    #[test]
    fn two_grid_matches_direct_assembly() {
        let plan = plan_1d(2, -500.0, 0.04);
        for &t in &[0.1, 0.35, PI / 2.0, -1.3] {
            let theta0 = Frequency::One(t);
            let got = assemble_eigenmatrix(&plan, theta0).unwrap();

            // Direct 2x2 from the four symbol values.
            let level1 = GridLevel::finest(64);
            let level2 = level1.coarser();
            let h = crate::kgrid::harmonics(theta0).unwrap();
            let shift = plan.shift;
            let a: Vec<Complex64> = h
                .members
                .iter()
                .map(|&f| discretization(f, level1, shift))
                .collect();
            let s: Vec<Complex64> = h
                .members
                .iter()
                .map(|&f| symbols::jacobi(f, level1, shift, 2.0 / 3.0).unwrap())
                .collect();
            let r: Vec<f64> = h.members.iter().map(|&f| restriction(f)).collect();
            let a2 = discretization(h.coarse(), level2, shift);
            let mut want = CMatrix::zeros(2, 2);
            for i in 0..2 {
                for j in 0..2 {
                    let mut v = -Complex64::from(r[i]) * a2.inv() * r[j] * a[j];
                    if i == j {
                        v += 1.0;
                    }
                    want[(i, j)] = v * s[j];
                }
            }
            for i in 0..2 {
                for j in 0..2 {
                    assert!(
                        (got[(i, j)] - want[(i, j)]).norm() < 1e-12,
                        "entry ({i},{j}) at theta {t}"
                    );
                }
            }
        }
    }

    /// Regularized Poisson limit at theta = pi/2: the spectral radius of the
    /// hand-assembled two-grid matrix must match the recursive assembly.
    #[test]
    fn regularized_poisson_two_grid() {
        let plan = plan_1d(2, -1e-6, 0.0);
        let theta0 = Frequency::One(PI / 2.0);
        let m = assemble_eigenmatrix(&plan, theta0).unwrap();
        let rho = spectral_radius(&m).unwrap();
        // Textbook two-grid analysis of weighted Jacobi (omega = 2/3) on
        // Poisson: at theta = pi/2 both harmonics have symbol 1/3 and the
        // correction halves them; the largest eigenvalue is 1/3.
        assert!(
            (rho - 1.0 / 3.0).abs() < 1e-6,
            "rho at pi/2 should be ~1/3, got {rho}"
        );
    }

    #[test]
    fn smoothing_powers_enter_as_expected() {
        // nu1 + nu2 split must not change the spectral radius at fixed total
        // in the two-grid case (diagonal smoother blocks, similarity).
        let base = plan_1d(2, -700.0, 0.2);
        let mut split = base;
        split.cycle.pre_smooth = 1;
        split.cycle.post_smooth = 1;
        let mut lumped = base;
        lumped.cycle.pre_smooth = 2;
        lumped.cycle.post_smooth = 0;
        for &t in &[0.3, 1.2] {
            let r1 = spectral_radius(&assemble_eigenmatrix(&split, Frequency::One(t)).unwrap())
                .unwrap();
            let r2 = spectral_radius(&assemble_eigenmatrix(&lumped, Frequency::One(t)).unwrap())
                .unwrap();
            assert!((r1 - r2).abs() < 1e-10, "{r1} vs {r2}");
        }
    }

    #[test]
    fn resonant_coarse_symbol_flagged() {
        // Choose sigma so the coarse symbol vanishes exactly at 2*theta0:
        // A_2(2t) = (2/h2^2)(1 - cos 2t) + sigma = 0.
        let t: f64 = 0.35;
        let h2 = 2.0 / 64.0;
        let sigma = -(2.0 / (h2 * h2)) * (1.0 - (2.0 * t).cos());
        let plan = plan_1d(2, sigma, 0.0);
        assert!(matches!(
            assemble_eigenmatrix(&plan, Frequency::One(t)),
            Err(KGridError::Resonant)
        ));
    }

    #[test]
    fn preconditioned_identity_limit() {
        // Exact MG (cycle matrix power -> 0) with beta = 0 at a non-resonant
        // frequency: K = I. The regularized Poisson cycle contracts at
        // theta = pi/2, so a large mu drives M^mu to zero.
        let plan = plan_1d(2, -1e-6, 0.0);
        let k = preconditioned_eigenmatrix(&plan, Frequency::One(PI / 2.0), 60).unwrap();
        let diff = k.sub(&CMatrix::identity(2));
        assert!(diff.frobenius_norm() < 1e-12);
    }

    #[test]
    fn preconditioned_exact_mg_limit_is_symbol_ratio() {
        // Large beta damps the cycle strongly; M^mu -> 0 and K becomes
        // diagonal with entries A(theta; sigma) / A(theta; sigma_tilde).
        let plan = plan_1d(2, -300.0, 2.0);
        let theta0 = Frequency::One(0.7);
        let m = assemble_eigenmatrix(&plan, theta0).unwrap();
        assert!(spectral_radius(&m).unwrap() < 0.9, "cycle must contract here");
        let k = preconditioned_eigenmatrix(&plan, theta0, 60).unwrap();
        let level = GridLevel::finest(64);
        let h = crate::kgrid::harmonics(theta0).unwrap();
        for (i, &f) in h.members.iter().enumerate() {
            let want = discretization(f, level, Shift::unshifted(-300.0))
                / discretization(f, level, plan.shift);
            assert!((k[(i, i)] - want).norm() < 1e-10);
            let j = 1 - i;
            assert!(k[(i, j)].norm() < 1e-10);
        }
    }

    /// For the Jacobi smoother every symbol is even in each frequency
    /// component and symmetric under component swap, so the spectrum of the
    /// eigenmatrix inherits those symmetries. The theta sweeps rely on this.
    #[test]
    fn jacobi_spectrum_symmetries() {
        let plan = plan_2d(3, -900.0, 0.3, 64);
        let samples = [(0.4, 1.1), (0.9, 0.2), (1.3, 1.3)];
        for &(t1, t2) in &samples {
            let r = |f| spectral_radius(&assemble_eigenmatrix(&plan, f).unwrap()).unwrap();
            let base = r(Frequency::Two(t1, t2));
            assert!((r(Frequency::Two(-t1, t2)) - base).abs() < 1e-9);
            assert!((r(Frequency::Two(t1, -t2)) - base).abs() < 1e-9);
            assert!((r(Frequency::Two(t2, t1)) - base).abs() < 1e-9);
        }
    }
}
