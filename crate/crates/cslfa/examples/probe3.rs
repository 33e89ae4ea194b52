// Scratch probe: (a) 2D periodic brute force vs LFA; (b) fine 1D curves
// around the expected local minima.
use cslfa::kgrid::{assemble_eigenmatrix, beta_min, CyclePlan, Smoother};
use cslfa::linalg::{eigenvalues, spectral_radius, CMatrix};
use cslfa::symbols::{Dimension, Frequency, Shift};
use num_complex::Complex64;
use std::f64::consts::PI;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Brute-force k-grid cycle on a 2D periodic N x N grid.
struct PeriodicMg2 {
    levels: u32,
    n: u32,
    shift: Shift,
    omega: f64,
}

impl PeriodicMg2 {
    fn mesh(&self, level: u32) -> f64 {
        f64::from(1 << (level - 1)) / f64::from(self.n)
    }

    fn points(&self, level: u32) -> usize {
        (self.n >> (level - 1)) as usize
    }

    fn apply_a(&self, level: u32, u: &[Complex64]) -> Vec<Complex64> {
        let n = self.points(level);
        let h = self.mesh(level);
        let inv_h2 = 1.0 / (h * h);
        let diag = c(4.0 * inv_h2) + self.shift.sigma_tilde();
        let idx = |i: usize, j: usize| (i % n) * n + (j % n);
        let mut out = vec![c(0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                out[idx(i, j)] = diag * u[idx(i, j)]
                    - inv_h2
                        * (u[idx(i + n - 1, j)]
                            + u[idx(i + 1, j)]
                            + u[idx(i, j + n - 1)]
                            + u[idx(i, j + 1)]);
            }
        }
        out
    }

    fn jacobi_sweep(&self, level: u32, u: &mut [Complex64], rhs: &[Complex64]) {
        let h = self.mesh(level);
        let inv_h2 = 1.0 / (h * h);
        let diag = c(4.0 * inv_h2) + self.shift.sigma_tilde();
        let au = self.apply_a(level, u);
        for j in 0..u.len() {
            u[j] += self.omega * (rhs[j] - au[j]) / diag;
        }
    }

    fn restrict(&self, level: u32, fine: &[Complex64]) -> Vec<Complex64> {
        let n = self.points(level);
        let m = n / 2;
        let idx = |i: usize, j: usize| (i % n) * n + (j % n);
        let mut out = vec![c(0.0); m * m];
        for ci in 0..m {
            for cj in 0..m {
                let (i, j) = (2 * ci, 2 * cj);
                let mut v = 0.25 * fine[idx(i, j)];
                v += 0.125
                    * (fine[idx(i + n - 1, j)]
                        + fine[idx(i + 1, j)]
                        + fine[idx(i, j + n - 1)]
                        + fine[idx(i, j + 1)]);
                v += 0.0625
                    * (fine[idx(i + n - 1, j + n - 1)]
                        + fine[idx(i + n - 1, j + 1)]
                        + fine[idx(i + 1, j + n - 1)]
                        + fine[idx(i + 1, j + 1)]);
                out[ci * m + cj] = v;
            }
        }
        out
    }

    fn prolong(&self, level: u32, coarse: &[Complex64]) -> Vec<Complex64> {
        let n = self.points(level);
        let m = n / 2;
        let mut fine = vec![c(0.0); n * n];
        let fidx = |i: usize, j: usize| (i % n) * n + (j % n);
        for ci in 0..m {
            for cj in 0..m {
                let v = coarse[ci * m + cj];
                let (i, j) = (2 * ci, 2 * cj);
                fine[fidx(i, j)] += v;
                fine[fidx(i + 1, j)] += 0.5 * v;
                fine[fidx(i + n - 1, j)] += 0.5 * v;
                fine[fidx(i, j + 1)] += 0.5 * v;
                fine[fidx(i, j + n - 1)] += 0.5 * v;
                fine[fidx(i + 1, j + 1)] += 0.25 * v;
                fine[fidx(i + 1, j + n - 1)] += 0.25 * v;
                fine[fidx(i + n - 1, j + 1)] += 0.25 * v;
                fine[fidx(i + n - 1, j + n - 1)] += 0.25 * v;
            }
        }
        fine
    }

    fn exact_solve(&self, level: u32, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.points(level);
        let h = self.mesh(level);
        let inv_h2 = 1.0 / (h * h);
        let diag = c(4.0 * inv_h2) + self.shift.sigma_tilde();
        let idx = |i: usize, j: usize| (i % n) * n + (j % n);
        let mut a = CMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                let row = idx(i, j);
                a[(row, row)] = diag;
                for col in [
                    idx(i + n - 1, j),
                    idx(i + 1, j),
                    idx(i, j + n - 1),
                    idx(i, j + 1),
                ] {
                    a[(row, col)] += c(-inv_h2);
                }
            }
        }
        a.lu().unwrap().solve(rhs).unwrap()
    }

    fn cycle(&self, level: u32, u: &mut Vec<Complex64>, rhs: &[Complex64]) {
        if level == self.levels {
            *u = self.exact_solve(level, rhs);
            return;
        }
        self.jacobi_sweep(level, u, rhs);
        let au = self.apply_a(level, u);
        let residual: Vec<Complex64> = rhs.iter().zip(&au).map(|(r, a)| r - a).collect();
        let coarse_rhs = self.restrict(level, &residual);
        let mut e = vec![c(0.0); coarse_rhs.len()];
        self.cycle(level + 1, &mut e, &coarse_rhs);
        let corr = self.prolong(level, &e);
        for (uj, cj) in u.iter_mut().zip(&corr) {
            *uj += cj;
        }
    }

    fn rho(&self) -> f64 {
        let n = self.points(1);
        let rhs = vec![c(0.0); n * n];
        let mut m = CMatrix::zeros(n * n, n * n);
        for col in 0..n * n {
            let mut v = vec![c(0.0); n * n];
            v[col] = c(1.0);
            self.cycle(1, &mut v, &rhs);
            for row in 0..n * n {
                m[(row, col)] = v[row];
            }
        }
        eigenvalues(&m).unwrap().radius
    }
}

fn main() {
    let omega = 2.0 / 3.0;

    // (a) 2D periodic brute force vs LFA, N=16, k=2,3.
    for levels in 2..=3u32 {
        for &(sigma, beta) in &[(-150.0, 0.25), (-600.0, 0.4)] {
            let mg = PeriodicMg2 {
                levels,
                n: 16,
                shift: Shift::new(sigma, beta),
                omega,
            };
            let brute = mg.rho();

            let plan = CyclePlan {
                dimension: Dimension::Two,
                levels,
                pre_smooth: 1,
                post_smooth: 0,
                smoother: Smoother::Jacobi { omega },
                finest_n: 16,
            }
            .with_shift(sigma, beta);
            // DFT-aligned bases: theta0 = 2^(k-2) * 2pi/16 * (m1, m2).
            let step = 2.0f64.powi(levels as i32 - 2) * 2.0 * PI / 16.0;
            let m_max = (PI / 2.0 / step).ceil() as i64 + 1;
            let mut lfa: f64 = 0.0;
            for m1 in -m_max..=m_max {
                for m2 in -m_max..=m_max {
                    let t1 = step * m1 as f64;
                    let t2 = step * m2 as f64;
                    if t1 <= -PI / 2.0 || t1 > PI / 2.0 + 1e-12 {
                        continue;
                    }
                    if t2 <= -PI / 2.0 || t2 > PI / 2.0 + 1e-12 {
                        continue;
                    }
                    let g = spectral_radius(
                        &assemble_eigenmatrix(&plan, Frequency::Two(t1.min(PI / 2.0), t2.min(PI / 2.0))).unwrap(),
                    )
                    .unwrap();
                    lfa = lfa.max(g);
                }
            }
            println!(
                "(a) 2D k={levels} sigma={sigma} beta={beta}: brute rho = {brute:.8}, LFA max = {lfa:.8}, diff = {:.2e}",
                (brute - lfa).abs()
            );
        }
    }

    // (b) fine 1D curves near the expected minima.
    let plan_1d = |levels: u32| CyclePlan {
        dimension: Dimension::One,
        levels,
        pre_smooth: 1,
        post_smooth: 0,
        smoother: Smoother::Jacobi { omega },
        finest_n: 64,
    };
    println!("(b) 1D k=3 curve, sigma in [-1700, -800]:");
    for i in 0..19 {
        let sigma = -800.0 - 50.0 * i as f64;
        let b = beta_min(&plan_1d(3), sigma).unwrap();
        println!("  sigma={sigma:.0}: beta_min={b:.4}");
    }
    println!("(b) 1D k=4 curve, sigma in [-460, -180]:");
    for i in 0..15 {
        let sigma = -180.0 - 20.0 * i as f64;
        let b = beta_min(&plan_1d(4), sigma).unwrap();
        println!("  sigma={sigma:.0}: beta_min={b:.4}");
    }
}
