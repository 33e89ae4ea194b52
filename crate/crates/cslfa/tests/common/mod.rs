//! Shared test oracles, kept independent of the library's own algorithms.
//!
//! The eigenvalue oracle goes through the characteristic polynomial
//! (Faddeev-LeVerrier) and a Durand-Kerner simultaneous root iteration,
//! which shares no code path with the Hessenberg/QR implementation it
//! checks. The two-grid oracle assembles the 2x2 eigenmatrix literally
//! from the four symbol values instead of going through the recursive
//! k-grid assembly.

#![allow(dead_code)]

use cslfa::linalg::CMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Coefficients `c_1..c_n` of `lambda^n + c_1 lambda^(n-1) + ... + c_n`
/// via the Faddeev-LeVerrier recursion. Fine for the small matrices used
/// in tests; not a production algorithm.
pub fn characteristic_polynomial(a: &CMatrix) -> Vec<Complex64> {
    assert!(a.is_square());
    let n = a.rows();
    let mut coeffs = Vec::with_capacity(n);
    let mut m = a.clone();
    for k in 1..=n {
        let c = -m.trace() / (k as f64);
        coeffs.push(c);
        if k < n {
            let mut shifted = m;
            for i in 0..n {
                shifted[(i, i)] += c;
            }
            m = a.mul(&shifted);
        }
    }
    coeffs
}

/// All roots of `lambda^n + c_1 lambda^(n-1) + ... + c_n` by Durand-Kerner.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len();
    if n == 0 {
        return Vec::new();
    }
    let eval = |z: Complex64| -> Complex64 {
        let mut p = Complex64::new(1.0, 0.0);
        for &c in coeffs {
            p = p * z + c;
        }
        p
    };
    // Cauchy-style radius bound keeps the start circle around the roots.
    let radius = 1.0
        + coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|i| seed.powu(i as u32 + 1) * radius / seed.norm().powi(i as i32 + 1) * 0.7)
        .collect();
    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                // Perturb coincident iterates and retry next sweep.
                roots[i] += Complex64::new(1e-8 * radius, 1e-8 * radius);
                max_step = f64::MAX;
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-13 * radius.max(1.0) {
            break;
        }
    }
    roots
}

/// Spectral radius through the characteristic polynomial route.
pub fn oracle_spectral_radius(a: &CMatrix) -> f64 {
    polynomial_roots(&characteristic_polynomial(a))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Eigenvalues of a 2x2 complex matrix in closed form.
pub fn eig2_closed_form(a: &CMatrix) -> (Complex64, Complex64) {
    assert_eq!((a.rows(), a.cols()), (2, 2));
    let half_trace = (a[(0, 0)] + a[(1, 1)]) * 0.5;
    let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
    let disc = (half_trace * half_trace - det).sqrt();
    (half_trace + disc, half_trace - disc)
}

/// Random complex matrix with entries in the unit square, seeded.
pub fn random_matrix(n: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Greedily match two eigenvalue lists and return the largest pairwise
/// distance. Lists must have equal length.
pub fn eigenvalue_list_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut remaining: Vec<Complex64> = b.to_vec();
    let mut worst = 0.0f64;
    for &za in a {
        let (idx, dist) = remaining
            .iter()
            .enumerate()
            .map(|(i, &zb)| (i, (za - zb).norm()))
            .min_by(|(_, x), (_, y)| x.total_cmp(y))
            .expect("non-empty");
        worst = worst.max(dist);
        remaining.remove(idx);
    }
    worst
}
