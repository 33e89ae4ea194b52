// Scratch probe: validate the k-grid recursion against (a) the literal
// three-grid eigenmatrix and (b) a brute-force periodic-grid cycle.
use cslfa::kgrid::{assemble_eigenmatrix, CyclePlan, Smoother};
use cslfa::linalg::{eigenvalues, spectral_radius, CMatrix};
use cslfa::symbols::{discretization, jacobi, restriction, Dimension, Frequency, GridLevel, Shift};
use num_complex::Complex64;
use std::f64::consts::PI;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Literal transcription of the 4x4 three-grid eigenmatrix with
/// theta^{0,0} = t0/2, theta^{0,1} = t0/2 + pi, theta^{1,0} = t1/2,
/// theta^{1,1} = t1/2 + pi (t1 = complement of t0).
fn literal_three_grid(n: u32, shift: Shift, omega: f64, t0: f64) -> CMatrix {
    let l1 = GridLevel::new(1, n);
    let l2 = GridLevel::new(2, n);
    let l3 = GridLevel::new(3, n);
    let t1 = t0 - t0.signum().max(0.0).mul_add(2.0, -1.0) * PI; // sign(0)=+1: t0 - sign*pi
    let fine = [t0 / 2.0, t0 / 2.0 + PI, t1 / 2.0, t1 / 2.0 + PI];

    // Inner two-grid at level 2 on the pair (t0, t1).
    let a2 = [
        discretization(Frequency::One(t0), l2, shift),
        discretization(Frequency::One(t1), l2, shift),
    ];
    let s2 = [
        jacobi(Frequency::One(t0), l2, shift, omega).unwrap(),
        jacobi(Frequency::One(t1), l2, shift, omega).unwrap(),
    ];
    let r2 = [restriction(Frequency::One(t0)), restriction(Frequency::One(t1))];
    let a3 = discretization(Frequency::One(2.0 * t0), l3, shift);
    let mut m23 = CMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let mut v = -c(r2[i]) * a3.inv() * c(r2[j]) * a2[j];
            if i == j {
                v += 1.0;
            }
            m23[(i, j)] = v * s2[j];
        }
    }

    // Outer level-1 stage.
    let a1: Vec<Complex64> = fine
        .iter()
        .map(|&t| discretization(Frequency::One(t), l1, shift))
        .collect();
    let s1: Vec<Complex64> = fine
        .iter()
        .map(|&t| jacobi(Frequency::One(t), l1, shift, omega).unwrap())
        .collect();
    let r1: Vec<f64> = fine.iter().map(|&t| restriction(Frequency::One(t))).collect();
    let x = CMatrix::identity(2).sub(&m23);
    let mut m13 = CMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            let gi = i / 2;
            let gj = j / 2;
            let mut v = -c(r1[i]) * x[(gi, gj)] * a2[gj].inv() * c(r1[j]) * a1[j];
            if i == j {
                v += 1.0;
            }
            m13[(i, j)] = v * s1[j];
        }
    }
    m13
}

/// Brute-force k-grid cycle error propagation matrix on a periodic grid of
/// N points (indices 0..N-1, cyclic stencils), exact solve at level k.
/// Returns M = (I - P A2^-1 ... ) S as a dense matrix by applying the cycle
/// to unit error vectors with zero right-hand side.
struct PeriodicMg {
    levels: u32,
    n: u32,
    shift: Shift,
    omega: f64,
}

impl PeriodicMg {
    fn apply_a(&self, level: u32, u: &[Complex64]) -> Vec<Complex64> {
        let n = u.len();
        let h = f64::from(1 << (level - 1)) / f64::from(self.n);
        let inv_h2 = 1.0 / (h * h);
        let diag = c(2.0 * inv_h2) + self.shift.sigma_tilde();
        (0..n)
            .map(|j| {
                let left = u[(j + n - 1) % n];
                let right = u[(j + 1) % n];
                diag * u[j] - inv_h2 * (left + right)
            })
            .collect()
    }

    fn jacobi_sweep(&self, level: u32, u: &mut [Complex64], rhs: &[Complex64]) {
        let n = u.len();
        let h = f64::from(1 << (level - 1)) / f64::from(self.n);
        let inv_h2 = 1.0 / (h * h);
        let diag = c(2.0 * inv_h2) + self.shift.sigma_tilde();
        let au = self.apply_a(level, u);
        for j in 0..n {
            u[j] += self.omega * (rhs[j] - au[j]) / diag;
        }
    }

    fn restrict(&self, fine: &[Complex64]) -> Vec<Complex64> {
        let n = fine.len();
        let m = n / 2;
        (0..m)
            .map(|j| {
                0.25 * fine[(2 * j + n - 1) % n] + 0.5 * fine[2 * j] + 0.25 * fine[(2 * j + 1) % n]
            })
            .collect()
    }

    fn prolong(&self, coarse: &[Complex64]) -> Vec<Complex64> {
        let m = coarse.len();
        let n = 2 * m;
        let mut fine = vec![c(0.0); n];
        for j in 0..m {
            fine[2 * j] += coarse[j];
            fine[(2 * j + 1) % n] += 0.5 * (coarse[j] + coarse[(j + 1) % m]);
        }
        fine
    }

    fn exact_solve(&self, level: u32, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = rhs.len();
        let h = f64::from(1 << (level - 1)) / f64::from(self.n);
        let inv_h2 = 1.0 / (h * h);
        let diag = c(2.0 * inv_h2) + self.shift.sigma_tilde();
        let mut a = CMatrix::zeros(n, n);
        for j in 0..n {
            a[(j, j)] = diag;
            a[(j, (j + 1) % n)] = c(-inv_h2);
            a[(j, (j + n - 1) % n)] = c(-inv_h2);
        }
        a.lu().unwrap().solve(rhs).unwrap()
    }

    fn cycle(&self, level: u32, u: &mut Vec<Complex64>, rhs: &[Complex64]) {
        if level == self.levels {
            *u = self.exact_solve(level, rhs);
            return;
        }
        self.jacobi_sweep(level, u, rhs); // nu1 = 1
        let au = self.apply_a(level, u);
        let residual: Vec<Complex64> = rhs.iter().zip(&au).map(|(r, a)| r - a).collect();
        let coarse_rhs = self.restrict(&residual);
        let mut e = vec![c(0.0); coarse_rhs.len()];
        self.cycle(level + 1, &mut e, &coarse_rhs);
        let corr = self.prolong(&e);
        for (uj, cj) in u.iter_mut().zip(&corr) {
            *uj += cj;
        }
        // nu2 = 0
    }

    fn error_propagation_matrix(&self) -> CMatrix {
        let n = self.n as usize;
        let rhs = vec![c(0.0); n];
        let mut m = CMatrix::zeros(n, n);
        for col in 0..n {
            let mut u = vec![c(0.0); n];
            u[col] = c(1.0);
            // error e' = M e; with rhs=0 and exact solution 0, u IS the error.
            let mut v = u.clone();
            self.cycle(1, &mut v, &rhs);
            for row in 0..n {
                m[(row, col)] = v[row];
            }
        }
        m
    }
}

fn main() {
    let omega = 2.0 / 3.0;

    // (a) literal vs recursive three-grid.
    let plan = CyclePlan {
        dimension: Dimension::One,
        levels: 3,
        pre_smooth: 1,
        post_smooth: 0,
        smoother: Smoother::Jacobi { omega },
        finest_n: 64,
    };
    let shift = Shift::new(-700.0, 0.1);
    let mut worst = 0.0f64;
    for &t0 in &[0.1, 0.35, -0.8, 1.2, PI / 2.0] {
        let rec = assemble_eigenmatrix(&plan.with_shift(-700.0, 0.1).cycle.with_shift(-700.0, 0.1), Frequency::One(t0)).unwrap();
        let lit = literal_three_grid(64, shift, omega, t0);
        let mut diff = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                diff = diff.max((rec[(i, j)] - lit[(i, j)]).norm());
            }
        }
        worst = worst.max(diff);
    }
    println!("(a) literal 3-grid vs recursion, worst entry diff: {worst:.3e}");

    // (b) periodic brute force vs LFA, k = 2, 3, 4.
    for levels in 2..=4u32 {
        let n = 32u32;
        for &(sigma, beta) in &[(-700.0, 0.15), (-150.0, 0.3), (-2500.0, 0.6)] {
            let mg = PeriodicMg { levels, n, shift: Shift::new(sigma, beta), omega };
            let m = mg.error_propagation_matrix();
            let brute: f64 = eigenvalues(&m).unwrap().radius;

            // LFA max over exactly the DFT-aligned base frequencies: the
            // finest tree modes theta0 / 2^(k-2) must be multiples of 2pi/N,
            // so theta0 = 2^(k-2) * 2pi/N * m with theta0 in (-pi/2, pi/2].
            let plan = CyclePlan {
                dimension: Dimension::One,
                levels,
                pre_smooth: 1,
                post_smooth: 0,
                smoother: Smoother::Jacobi { omega },
                finest_n: n,
            }
            .with_shift(sigma, beta);
            let step = 2.0f64.powi(levels as i32 - 2) * 2.0 * PI / f64::from(n);
            let m_max = (PI / 2.0 / step).floor() as i64;
            let mut lfa: f64 = 0.0;
            for mm in -m_max..=m_max {
                let t0 = step * mm as f64;
                if t0 <= -PI / 2.0 || t0 > PI / 2.0 {
                    continue;
                }
                let g = spectral_radius(
                    &assemble_eigenmatrix(&plan, Frequency::One(t0)).unwrap(),
                )
                .unwrap();
                lfa = lfa.max(g);
            }
            // include the +pi/2 endpoint if it is DFT-aligned
            if (PI / 2.0 / step - (PI / 2.0 / step).round()).abs() < 1e-9 {
                let g = spectral_radius(
                    &assemble_eigenmatrix(&plan, Frequency::One(PI / 2.0)).unwrap(),
                )
                .unwrap();
                lfa = lfa.max(g);
            }
            println!(
                "(b) k={levels} sigma={sigma} beta={beta}: brute rho = {brute:.8}, LFA max G = {lfa:.8}, diff = {:.2e}",
                (brute - lfa).abs()
            );
        }
    }
}
