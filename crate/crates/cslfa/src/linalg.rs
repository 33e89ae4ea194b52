//! Minimal dense complex linear algebra.
//!
//! The Fourier eigenmatrices handled by this crate are small (at most
//! 64x64 for a two-dimensional 4-grid analysis), so everything here is a
//! plain row-major `Vec<Complex64>` with textbook algorithms: partial-pivot
//! LU for inverses and coarse-grid solves, Householder reduction to
//! Hessenberg form followed by Wilkinson-shifted QR for eigenvalues.

use num_complex::Complex64;
use std::fmt;
use std::ops::{Index, IndexMut};
use thiserror::Error;

/// Hard cap on eigenproblem dimension; everything in this crate stays far
/// below it.
pub const MAX_EIGEN_DIM: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix entry ({row},{col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("matrix dimension {dim} exceeds the supported maximum {MAX_EIGEN_DIM}")]
    DimensionTooLarge { dim: usize },
    #[error("matrix is singular at pivot {pivot}")]
    Singular { pivot: usize },
    #[error("QR iteration failed to converge after {iterations} sweeps")]
    NoConvergence { iterations: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn first_non_finite(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
            .map(|p| (p / self.cols, p % self.cols))
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let lhs_row = i * out.cols;
                let rhs_row = k * rhs.cols;
                for j in 0..rhs.cols {
                    out.data[lhs_row + j] += a * rhs.data[rhs_row + j];
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(&rhs.data) {
            *o -= r;
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> CMatrix {
        let mut out = self.clone();
        for o in out.data.iter_mut() {
            *o *= factor;
        }
        out
    }

    /// Matrix power by repeated multiplication; exponents here are tiny
    /// (inner multigrid cycle counts).
    pub fn pow(&self, exponent: u32) -> CMatrix {
        assert!(self.is_square());
        let mut out = CMatrix::identity(self.rows);
        for _ in 0..exponent {
            out = out.mul(self);
        }
        out
    }

    /// Scale row `i` by `factor` (diagonal matrix applied from the left).
    pub fn scale_row(&mut self, i: usize, factor: Complex64) {
        for j in 0..self.cols {
            self[(i, j)] *= factor;
        }
    }

    /// Scale column `j` by `factor` (diagonal matrix applied from the right).
    pub fn scale_col(&mut self, j: usize, factor: Complex64) {
        for i in 0..self.rows {
            self[(i, j)] *= factor;
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn lu(&self) -> Result<LuFactors, LinalgError> {
        LuFactors::new(self)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4e}{:+.4e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// All eigenvalues of a matrix together with its spectral radius.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub radius: f64,
}

impl Spectrum {
    fn from_eigenvalues(eigenvalues: Vec<Complex64>) -> Self {
        let radius = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Self { eigenvalues, radius }
    }
}

/// Partial-pivot LU factorization, used for small inverses and the exact
/// coarsest-grid solve in the multigrid cycle.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: CMatrix,
    pivots: Vec<usize>,
}

impl LuFactors {
    fn new(a: &CMatrix) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::NonSquare {
                rows: a.rows,
                cols: a.cols,
            });
        }
        if let Some((row, col)) = a.first_non_finite() {
            return Err(LinalgError::NonFinite { row, col });
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut pivots = vec![0usize; n];
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best < 1e-300 {
                return Err(LinalgError::Singular { pivot: k });
            }
            pivots[k] = p;
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in k + 1..n {
                    let delta = factor * lu[(k, j)];
                    lu[(i, j)] -= delta;
                }
            }
        }
        Ok(Self { lu, pivots })
    }

    pub fn dimension(&self) -> usize {
        self.lu.rows()
    }

    pub fn solve(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        let n = self.dimension();
        if rhs.len() != n {
            return Err(LinalgError::DimensionMismatch {
                left: n,
                right: rhs.len(),
            });
        }
        let mut x = rhs.to_vec();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
        }
        for k in 0..n {
            for i in k + 1..n {
                let delta = self.lu[(i, k)] * x[k];
                x[i] -= delta;
            }
        }
        for k in (0..n).rev() {
            for j in k + 1..n {
                let delta = self.lu[(k, j)] * x[j];
                x[k] -= delta;
            }
            x[k] /= self.lu[(k, k)];
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<CMatrix, LinalgError> {
        let n = self.dimension();
        let mut inv = CMatrix::zeros(n, n);
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        for col in 0..n {
            e.fill(Complex64::new(0.0, 0.0));
            e[col] = Complex64::new(1.0, 0.0);
            let x = self.solve(&e)?;
            for row in 0..n {
                inv[(row, col)] = x[row];
            }
        }
        Ok(inv)
    }
}

fn validate_eigen_input(m: &CMatrix) -> Result<(), LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() > MAX_EIGEN_DIM {
        return Err(LinalgError::DimensionTooLarge { dim: m.rows() });
    }
    if let Some((row, col)) = m.first_non_finite() {
        return Err(LinalgError::NonFinite { row, col });
    }
    Ok(())
}

/// All eigenvalues of a square complex matrix.
///
/// Householder reduction to upper Hessenberg form followed by explicit
/// Wilkinson-shifted QR steps with deflation. Matrices here are tiny, so
/// robustness is the only concern; exceptional shifts are injected when a
/// subdiagonal entry stagnates.
pub fn eigenvalues(m: &CMatrix) -> Result<Spectrum, LinalgError> {
    validate_eigen_input(m)?;
    let n = m.rows();
    if n == 0 {
        return Ok(Spectrum::from_eigenvalues(Vec::new()));
    }
    if n == 1 {
        return Ok(Spectrum::from_eigenvalues(vec![m[(0, 0)]]));
    }
    let mut h = hessenberg(m);
    let mut eigs = Vec::with_capacity(n);
    let mut high = n - 1;
    let mut iterations_on_block = 0usize;
    let mut total_iterations = 0usize;
    let max_iterations = 60 * n;

    loop {
        // Deflate negligible subdiagonals.
        for l in 1..=high {
            let scale = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if h[(l, l - 1)].norm() <= f64::EPSILON * scale.max(1e-300) {
                h[(l, l - 1)] = Complex64::new(0.0, 0.0);
            }
        }
        // Active block [low..=high]: scan upwards for the first zero subdiagonal.
        let mut low = high;
        while low > 0 && h[(low, low - 1)] != Complex64::new(0.0, 0.0) {
            low -= 1;
        }
        if low == high {
            eigs.push(h[(high, high)]);
            if high == 0 {
                break;
            }
            high -= 1;
            iterations_on_block = 0;
            continue;
        }
        if low + 1 == high {
            let (l1, l2) = eig2(h[(low, low)], h[(low, high)], h[(high, low)], h[(high, high)]);
            eigs.push(l1);
            eigs.push(l2);
            if low == 0 {
                break;
            }
            high = low - 1;
            iterations_on_block = 0;
            continue;
        }

        total_iterations += 1;
        iterations_on_block += 1;
        if total_iterations > max_iterations {
            return Err(LinalgError::NoConvergence {
                iterations: total_iterations,
            });
        }

        let shift = if iterations_on_block % 12 == 0 {
            // Exceptional shift to break symmetric stagnation.
            h[(high, high)] + Complex64::new(0.75 * h[(high, high - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(high - 1, high - 1)],
                h[(high - 1, high)],
                h[(high, high - 1)],
                h[(high, high)],
            )
        };
        qr_step(&mut h, low, high, shift);
    }

    debug_assert_eq!(eigs.len(), n);
    Ok(Spectrum::from_eigenvalues(eigs))
}

/// Spectral radius of a square complex matrix.
pub fn spectral_radius(m: &CMatrix) -> Result<f64, LinalgError> {
    Ok(eigenvalues(m)?.radius)
}

/// Reduce to upper Hessenberg form by Householder reflections.
fn hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.rows();
    let mut h = a.clone();
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        // Householder vector annihilating h[k+2.., k].
        let mut norm_sqr = 0.0;
        for i in k + 1..n {
            norm_sqr += h[(i, k)].norm_sqr();
        }
        let alpha = h[(k + 1, k)];
        let norm = norm_sqr.sqrt();
        if norm <= f64::EPSILON * h[(k, k)].norm().max(1.0) {
            continue;
        }
        // Reflector direction: v = x + sign(x_1)*|x|*e_1 in the complex sense.
        let phase = if alpha.norm() > 0.0 {
            alpha / alpha.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let beta = -phase * norm;
        let mut vnorm_sqr = 0.0;
        for i in k + 1..n {
            v[i] = h[(i, k)];
            if i == k + 1 {
                v[i] -= beta;
            }
            vnorm_sqr += v[i].norm_sqr();
        }
        if vnorm_sqr <= 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm_sqr;

        // H <- P H with P = I - tau v v^H  (rows k+1.. of columns k..).
        for j in k..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in k + 1..n {
                dot += v[i].conj() * h[(i, j)];
            }
            dot *= tau;
            for i in k + 1..n {
                let delta = v[i] * dot;
                h[(i, j)] -= delta;
            }
        }
        // H <- H P (all rows, columns k+1..).
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for j in k + 1..n {
                dot += h[(i, j)] * v[j];
            }
            dot *= tau;
            for j in k + 1..n {
                let delta = dot * v[j].conj();
                h[(i, j)] -= delta;
            }
        }
        h[(k + 1, k)] = beta;
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    h
}

/// Eigenvalues of the 2x2 block [[a, b], [c, d]], cancellation-safe.
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half_trace = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_trace * half_trace - det).sqrt();
    // Pick the sign that maximizes |half_trace + disc| to avoid cancellation.
    let s = if (half_trace + disc).norm() >= (half_trace - disc).norm() {
        disc
    } else {
        -disc
    };
    let l1 = half_trace + s;
    let l2 = if l1.norm() > 0.0 { det / l1 } else { half_trace - s };
    (l1, l2)
}

/// Wilkinson shift: the eigenvalue of the trailing 2x2 closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let (l1, l2) = eig2(a, b, c, d);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR step on the Hessenberg block [low..=high].
fn qr_step(h: &mut CMatrix, low: usize, high: usize, shift: Complex64) {
    let mut rotations = Vec::with_capacity(high - low);
    for i in low..=high {
        h[(i, i)] -= shift;
    }
    // QR factorization by Givens rotations chasing the subdiagonal.
    for i in low..high {
        let (c, s) = givens(h[(i, i)], h[(i + 1, i)]);
        rotations.push((c, s));
        for j in i..=high {
            let hi = h[(i, j)];
            let hk = h[(i + 1, j)];
            h[(i, j)] = c * hi + s * hk;
            h[(i + 1, j)] = -s.conj() * hi + c * hk;
        }
    }
    // RQ: apply the adjoint rotations on the right.
    for (idx, &(c, s)) in rotations.iter().enumerate() {
        let i = low + idx;
        let row_end = (i + 1).min(high);
        for r in low..=row_end {
            let vi = h[(r, i)];
            let vk = h[(r, i + 1)];
            h[(r, i)] = c * vi + s.conj() * vk;
            h[(r, i + 1)] = -s * vi + c * vk;
        }
    }
    for i in low..=high {
        h[(i, i)] += shift;
    }
}

/// Complex Givens rotation with real cosine: G = [[c, s], [-conj(s), c]]
/// zeroing the second component of (f, g).
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let fn_ = f.norm();
    if fn_ == 0.0 {
        return (0.0, g.conj() / gn);
    }
    let d = (fn_ * fn_ + gn * gn).sqrt();
    let c = fn_ / d;
    let s = (f / fn_) * (g.conj() / d);
    (c, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_eigenvalues() {
        let m = CMatrix::identity(4);
        let s = eigenvalues(&m).unwrap();
        assert_eq!(s.eigenvalues.len(), 4);
        for z in &s.eigenvalues {
            assert!((z - c(1.0, 0.0)).norm() < 1e-12);
        }
        assert!((s.radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_eigenvalues() {
        let m = CMatrix::diagonal(&[c(2.0, 0.0), c(0.0, -3.0)]);
        let s = eigenvalues(&m).unwrap();
        let mut mods: Vec<f64> = s.eigenvalues.iter().map(|z| z.norm()).collect();
        mods.sort_by(f64::total_cmp);
        assert!((mods[0] - 2.0).abs() < 1e-12);
        assert!((mods[1] - 3.0).abs() < 1e-12);
        assert!((s.radius - 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_radius() {
        let m = CMatrix::zeros(3, 3);
        assert_eq!(spectral_radius(&m).unwrap(), 0.0);
    }

    #[test]
    fn diag_radius() {
        let m = CMatrix::diagonal(&[c(0.5, 0.0), c(1.2, 0.0)]);
        assert!((spectral_radius(&m).unwrap() - 1.2).abs() < 1e-12);
    }

    #[test]
    fn upper_triangular_eigenvalues_are_diagonal() {
        let mut m = CMatrix::zeros(4, 4);
        let diag = [c(1.0, 2.0), c(-0.5, 0.25), c(3.0, 0.0), c(0.0, -1.5)];
        for i in 0..4 {
            m[(i, i)] = diag[i];
            for j in i + 1..4 {
                m[(i, j)] = c(0.3 * (i + j) as f64, -0.1 * j as f64);
            }
        }
        let s = eigenvalues(&m).unwrap();
        let mut got = s.eigenvalues.clone();
        // Match each expected diagonal entry against the closest computed one.
        for want in diag {
            let (idx, _) = got
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| (*a - want).norm().total_cmp(&(*b - want).norm()))
                .unwrap();
            assert!((got[idx] - want).norm() < 1e-10, "missing eigenvalue {want}");
            got.remove(idx);
        }
    }

    #[test]
    fn non_square_rejected() {
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(
            eigenvalues(&m),
            Err(LinalgError::NonSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn non_finite_rejected() {
        let mut m = CMatrix::identity(2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(eigenvalues(&m), Err(LinalgError::NonFinite { .. })));
    }

    #[test]
    fn lu_solves_small_system() {
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = c(2.0, 1.0);
        m[(0, 1)] = c(-1.0, 0.0);
        m[(1, 0)] = c(0.0, 1.0);
        m[(1, 1)] = c(3.0, 0.0);
        m[(1, 2)] = c(1.0, 0.0);
        m[(2, 1)] = c(-1.0, 2.0);
        m[(2, 2)] = c(4.0, -1.0);
        let x_true = vec![c(1.0, -1.0), c(2.0, 0.5), c(-0.25, 3.0)];
        let mut b = vec![c(0.0, 0.0); 3];
        for i in 0..3 {
            for j in 0..3 {
                b[i] += m[(i, j)] * x_true[j];
            }
        }
        let lu = m.lu().unwrap();
        let x = lu.solve(&b).unwrap();
        for (got, want) in x.iter().zip(&x_true) {
            assert!((got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn lu_inverse_roundtrip() {
        let mut m = CMatrix::identity(4);
        m[(0, 3)] = c(0.5, -0.5);
        m[(2, 1)] = c(-1.0, 0.25);
        m[(3, 0)] = c(0.0, 0.125);
        let inv = m.lu().unwrap().inverse().unwrap();
        let prod = m.mul(&inv);
        let diff = prod.sub(&CMatrix::identity(4));
        assert!(diff.frobenius_norm() < 1e-12);
    }

    #[test]
    fn singular_matrix_reported() {
        let m = CMatrix::zeros(2, 2);
        assert!(matches!(m.lu(), Err(LinalgError::Singular { .. })));
    }

    #[test]
    fn matrix_power() {
        let m = CMatrix::diagonal(&[c(2.0, 0.0), c(0.0, 1.0)]);
        let p = m.pow(3);
        assert!((p[(0, 0)] - c(8.0, 0.0)).norm() < 1e-14);
        assert!((p[(1, 1)] - c(0.0, -1.0)).norm() < 1e-14);
    }
}
