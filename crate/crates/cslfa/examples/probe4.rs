// Scratch probe: does a gamma=2 (W-cycle) k-grid recursion reproduce the
// published anchors instead of the printed gamma=1 recursion?
use cslfa::kgrid::harmonics;
use cslfa::linalg::{spectral_radius, CMatrix};
use cslfa::symbols::{discretization, jacobi, restriction, Frequency, GridLevel, Shift};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

fn tree(levels: u32, theta0: Frequency) -> Vec<Vec<Frequency>> {
    let k = levels as usize;
    let mut lists: Vec<Vec<Frequency>> = vec![Vec::new(); k];
    let top = harmonics(theta0).unwrap();
    lists[k - 1] = vec![top.coarse()];
    lists[k - 2] = top.members.clone();
    for l in (0..k.saturating_sub(2)).rev() {
        lists[l] = lists[l + 1]
            .iter()
            .flat_map(|&phi| harmonics(phi.scaled(0.5)).unwrap().members)
            .collect();
    }
    lists
}

fn assemble(
    lists: &[Vec<Frequency>],
    idx: usize,
    n_grid: u32,
    shift: Shift,
    omega: f64,
    nu1: u32,
    nu2: u32,
    gamma: u32,
    split: usize,
) -> CMatrix {
    let fine = &lists[idx];
    let coarse = &lists[idx + 1];
    let n = fine.len();
    let m = coarse.len();
    let level = GridLevel::new(idx as u32 + 1, n_grid);
    let coarse_level = level.coarser();
    let s: Vec<Complex64> = fine
        .iter()
        .map(|&f| jacobi(f, level, shift, omega).unwrap())
        .collect();
    let a_fine: Vec<Complex64> = fine.iter().map(|&f| discretization(f, level, shift)).collect();
    let t: Vec<f64> = fine.iter().map(|&f| restriction(f)).collect();
    let inv_a_coarse: Vec<Complex64> = coarse
        .iter()
        .map(|&f| discretization(f, coarse_level, shift).inv())
        .collect();
    let mut x = if idx + 2 == lists.len() {
        CMatrix::identity(m)
    } else {
        let inner = assemble(lists, idx + 1, n_grid, shift, omega, nu1, nu2, gamma, split);
        CMatrix::identity(m).sub(&inner.pow(gamma))
    };
    for g in 0..m {
        x.scale_col(g, inv_a_coarse[g]);
    }
    let mut mtx = CMatrix::from_fn(n, n, |i, j| {
        let mut v = -t[i] * x[(i / split, j / split)] * t[j] * a_fine[j];
        if i == j {
            v += 1.0;
        }
        v
    });
    for i in 0..n {
        if nu2 > 0 {
            mtx.scale_row(i, s[i].powu(nu2));
        }
        if nu1 > 0 {
            mtx.scale_col(i, s[i].powu(nu1));
        }
    }
    mtx
}

fn beta_min_2d(
    levels: u32,
    n: u32,
    sigma: f64,
    omega: f64,
    nu1: u32,
    nu2: u32,
    gamma: u32,
) -> f64 {
    let res = 128usize;
    let samples: Vec<(usize, usize)> = (res / 2..res)
        .flat_map(|j1| (res / 2..=j1).map(move |j2| (j1, j2)))
        .collect();
    let converges = |beta: f64| -> bool {
        let shift = Shift::new(sigma, beta);
        !samples.par_iter().any(|&(j1, j2)| {
            let ang = |j: usize| -PI / 2.0 + (j as f64 + 0.5) * PI / res as f64;
            let lists = tree(levels, Frequency::Two(ang(j1), ang(j2)));
            let m = assemble(&lists, 0, n, shift, omega, nu1, nu2, gamma, 4);
            if m.inf_norm().min(m.frobenius_norm()) <= 1.0 {
                return false;
            }
            spectral_radius(&m).unwrap() > 1.0
        })
    };
    if converges(0.0) {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while !converges(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > 64.0 {
            return f64::NAN;
        }
    }
    for _ in 0..12 {
        let mid = 0.5 * (lo + hi);
        if converges(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn beta_min_1d(levels: u32, n: u32, sigma: f64, omega: f64, gamma: u32) -> f64 {
    let res = 1024usize;
    let converges = |beta: f64| -> bool {
        let shift = Shift::new(sigma, beta);
        !(res / 2..res).into_par_iter().any(|j| {
            let t = -PI / 2.0 + (j as f64 + 0.5) * PI / res as f64;
            let lists = tree(levels, Frequency::One(t));
            let m = assemble(&lists, 0, n, shift, omega, 1, 0, gamma, 2);
            if m.inf_norm().min(m.frobenius_norm()) <= 1.0 {
                return false;
            }
            spectral_radius(&m).unwrap() > 1.0
        })
    };
    if converges(0.0) {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while !converges(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > 64.0 {
            return f64::NAN;
        }
    }
    for _ in 0..12 {
        let mid = 0.5 * (lo + hi);
        if converges(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn main() {
    let omega = 2.0 / 3.0;
    println!("W-cycle (gamma=2) 2D 4-grid N=32 sigma=-1000 nu=(1,0): {:.4}", beta_min_2d(4, 32, -1000.0, omega, 1, 0, 2));
    println!("W-cycle (gamma=2) 2D 4-grid N=64 sigma=-1600 nu=(1,1): {:.4}", beta_min_2d(4, 64, -1600.0, omega, 1, 1, 2));
    println!("W-cycle (gamma=2) 2D 4-grid N=64 sigma=-1600 nu=(2,0): {:.4}", beta_min_2d(4, 64, -1600.0, omega, 2, 0, 2));

    println!("W-cycle 1D k=3 N=64 curve near -1024:");
    for sigma in [-900.0, -1000.0, -1024.0, -1100.0, -1200.0, -1350.0] {
        println!("  sigma={sigma}: {:.4}", beta_min_1d(3, 64, sigma, omega, 2));
    }
    println!("W-cycle 1D k=4 N=64 curve near -256:");
    for sigma in [-220.0, -256.0, -300.0, -340.0] {
        println!("  sigma={sigma}: {:.4}", beta_min_1d(4, 64, sigma, omega, 2));
    }
}
