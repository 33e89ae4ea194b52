//! Checks the QR eigenvalue path against an independent
//! characteristic-polynomial root-finder oracle, plus the algebraic
//! invariances a spectrum must satisfy.

mod common;

use cslfa::linalg::{eigenvalues, spectral_radius, CMatrix};
use num_complex::Complex64;

#[test]
fn random_matrices_match_root_finder_oracle() {
    for seed in 0..24u64 {
        let n = 2 + (seed as usize % 7);
        let a = common::random_matrix(n, seed);
        let qr_radius = spectral_radius(&a).unwrap();
        let oracle_radius = common::oracle_spectral_radius(&a);
        let rel = (qr_radius - oracle_radius).abs() / oracle_radius.max(1e-30);
        assert!(
            rel < 1e-6,
            "seed {seed} n {n}: qr {qr_radius} vs oracle {oracle_radius} (rel {rel:.2e})"
        );
    }
}

#[test]
fn random_8x8_radius_matches_oracle() {
    for seed in 100..108u64 {
        let a = common::random_matrix(8, seed);
        let qr_radius = spectral_radius(&a).unwrap();
        let oracle_radius = common::oracle_spectral_radius(&a);
        let rel = (qr_radius - oracle_radius).abs() / oracle_radius.max(1e-30);
        assert!(rel < 1e-6, "seed {seed}: rel error {rel:.2e}");
    }
}

#[test]
fn full_eigenvalue_lists_match_oracle() {
    for seed in 0..12u64 {
        let n = 3 + (seed as usize % 6);
        let a = common::random_matrix(n, seed.wrapping_add(500));
        let qr = eigenvalues(&a).unwrap();
        let oracle = common::polynomial_roots(&common::characteristic_polynomial(&a));
        let dist = common::eigenvalue_list_distance(&qr.eigenvalues, &oracle);
        assert!(dist < 1e-6, "seed {seed} n {n}: eigenvalue mismatch {dist:.2e}");
    }
}

#[test]
fn radius_consistent_with_eigenvalue_list() {
    let a = common::random_matrix(9, 7);
    let s = eigenvalues(&a).unwrap();
    let max_mod = s.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!((s.radius - max_mod).abs() <= 1e-12 * max_mod);
}

#[test]
fn similarity_invariance() {
    // rho(P A P^-1) == rho(A) for a well-conditioned random P.
    for seed in 0..8u64 {
        let a = common::random_matrix(6, seed);
        let mut p = common::random_matrix(6, seed + 1000);
        // Diagonal dominance keeps P comfortably invertible.
        for i in 0..6 {
            p[(i, i)] += Complex64::new(4.0, 0.0);
        }
        let p_inv = p.lu().unwrap().inverse().unwrap();
        let similar = p.mul(&a).mul(&p_inv);
        let r1 = spectral_radius(&a).unwrap();
        let r2 = spectral_radius(&similar).unwrap();
        assert!(
            (r1 - r2).abs() / r1.max(1e-30) < 1e-6,
            "seed {seed}: {r1} vs {r2}"
        );
    }
}

#[test]
fn scalar_scaling() {
    let a = common::random_matrix(7, 42);
    let c = Complex64::new(-1.75, 0.6);
    let r1 = spectral_radius(&a).unwrap();
    let r2 = spectral_radius(&a.scale(c)).unwrap();
    assert!((r2 - c.norm() * r1).abs() < 1e-9 * r2.max(1.0));
}

#[test]
fn two_by_two_closed_form() {
    let a = common::random_matrix(2, 3);
    let s = eigenvalues(&a).unwrap();
    let (l1, l2) = common::eig2_closed_form(&a);
    let dist = common::eigenvalue_list_distance(&s.eigenvalues, &[l1, l2]);
    assert!(dist < 1e-12, "2x2 mismatch {dist:.2e}");
}

#[test]
fn defective_jordan_block() {
    // A 4x4 Jordan block with eigenvalue 0.5-0.25i: all eigenvalues equal.
    let lam = Complex64::new(0.5, -0.25);
    let mut a = CMatrix::zeros(4, 4);
    for i in 0..4 {
        a[(i, i)] = lam;
        if i + 1 < 4 {
            a[(i, i + 1)] = Complex64::new(1.0, 0.0);
        }
    }
    let s = eigenvalues(&a).unwrap();
    // Defective eigenvalues are only accurate to eps^(1/4); allow that.
    for z in &s.eigenvalues {
        assert!((z - lam).norm() < 1e-3, "jordan eigenvalue {z}");
    }
}
