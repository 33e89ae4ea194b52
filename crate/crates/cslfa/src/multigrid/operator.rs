//! Matrix-free shifted Helmholtz operator and smoother sweeps.

use super::grid::GridFunction;
use super::MultigridError;
use crate::linalg::CMatrix;
use crate::symbols::{Dimension, Shift, RESONANCE_EPS};
use num_complex::Complex64;

/// Second-order finite difference discretization of
/// `-laplace + sigma_tilde` on one level: `1/h^2 [-1, 2 + sigma_tilde h^2, -1]`
/// in 1D, the five-point analogue in 2D. Rediscretized per level (the mesh
/// width is `1/intervals`), homogeneous Dirichlet boundary as a zero halo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelmholtzOperator {
    pub dimension: Dimension,
    pub intervals: u32,
    pub shift: Shift,
}

impl HelmholtzOperator {
    pub fn new(dimension: Dimension, intervals: u32, shift: Shift) -> Self {
        Self {
            dimension,
            intervals,
            shift,
        }
    }

    pub fn mesh_width(&self) -> f64 {
        1.0 / f64::from(self.intervals)
    }

    /// Diagonal entry `(2d + sigma_tilde h^2) / h^2`.
    pub fn diagonal(&self) -> Complex64 {
        let h = self.mesh_width();
        let d = self.dimension.as_usize() as f64;
        (Complex64::new(2.0 * d, 0.0) + self.shift.sigma_tilde() * h * h) / (h * h)
    }

    fn check_geometry(&self, u: &GridFunction) -> Result<(), MultigridError> {
        if u.dimension() != self.dimension || u.intervals() != self.intervals {
            return Err(MultigridError::GeometryMismatch {
                expected: GridFunction::interior_len(self.dimension, self.intervals),
                got: u.values().len(),
            });
        }
        Ok(())
    }

    /// Matrix-free stencil application `A u`.
    pub fn apply(&self, u: &GridFunction) -> Result<GridFunction, MultigridError> {
        self.check_geometry(u)?;
        let h = self.mesh_width();
        let inv_h2 = 1.0 / (h * h);
        let diag = self.diagonal();
        let mut out = GridFunction::zeros(self.dimension, self.intervals);
        match self.dimension {
            Dimension::One => {
                let n = self.intervals as usize - 1;
                let v = u.values();
                let o = out.values_mut();
                for j in 0..n {
                    let left = if j > 0 { v[j - 1] } else { Complex64::new(0.0, 0.0) };
                    let right = if j + 1 < n { v[j + 1] } else { Complex64::new(0.0, 0.0) };
                    o[j] = diag * v[j] - inv_h2 * (left + right);
                }
            }
            Dimension::Two => {
                let n = self.intervals as usize - 1;
                let v = u.values();
                let o = out.values_mut();
                for i in 0..n {
                    for j in 0..n {
                        let mut neighbors = Complex64::new(0.0, 0.0);
                        if i > 0 {
                            neighbors += v[(i - 1) * n + j];
                        }
                        if i + 1 < n {
                            neighbors += v[(i + 1) * n + j];
                        }
                        if j > 0 {
                            neighbors += v[i * n + j - 1];
                        }
                        if j + 1 < n {
                            neighbors += v[i * n + j + 1];
                        }
                        o[i * n + j] = diag * v[i * n + j] - inv_h2 * neighbors;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `rhs - A u`.
    pub fn residual(
        &self,
        u: &GridFunction,
        rhs: &GridFunction,
    ) -> Result<GridFunction, MultigridError> {
        self.check_geometry(rhs)?;
        let mut r = self.apply(u)?;
        for (rv, fv) in r.values_mut().iter_mut().zip(rhs.values()) {
            *rv = fv - *rv;
        }
        Ok(r)
    }

    fn checked_diagonal(&self) -> Result<Complex64, MultigridError> {
        let h = self.mesh_width();
        let d = self.dimension.as_usize() as f64;
        let scaled = Complex64::new(2.0 * d, 0.0) + self.shift.sigma_tilde() * h * h;
        if scaled.norm() < RESONANCE_EPS {
            return Err(MultigridError::ResonantDiagonal {
                modulus: scaled.norm(),
            });
        }
        Ok(scaled / (h * h))
    }

    /// One weighted Jacobi sweep `u += omega D^-1 (rhs - A u)`.
    pub fn jacobi_sweep(
        &self,
        u: &mut GridFunction,
        rhs: &GridFunction,
        omega: f64,
    ) -> Result<(), MultigridError> {
        self.check_geometry(rhs)?;
        let diag = self.checked_diagonal()?;
        let r = self.residual(u, rhs)?;
        let factor = omega / diag;
        for (uv, rv) in u.values_mut().iter_mut().zip(r.values()) {
            *uv += factor * rv;
        }
        Ok(())
    }

    /// One lexicographic Gauss-Seidel sweep (1D only).
    pub fn gauss_seidel_sweep(
        &self,
        u: &mut GridFunction,
        rhs: &GridFunction,
    ) -> Result<(), MultigridError> {
        if self.dimension != Dimension::One {
            return Err(MultigridError::InvalidCycle {
                reason: "Gauss-Seidel smoothing is one-dimensional only",
            });
        }
        self.check_geometry(u)?;
        self.check_geometry(rhs)?;
        let h = self.mesh_width();
        let h2 = h * h;
        let center = Complex64::new(2.0, 0.0) + self.shift.sigma_tilde() * h2;
        if center.norm() < RESONANCE_EPS {
            return Err(MultigridError::ResonantDiagonal {
                modulus: center.norm(),
            });
        }
        let n = self.intervals as usize - 1;
        let f = rhs.values().to_vec();
        let v = u.values_mut();
        for j in 0..n {
            let left = if j > 0 { v[j - 1] } else { Complex64::new(0.0, 0.0) };
            let right = if j + 1 < n { v[j + 1] } else { Complex64::new(0.0, 0.0) };
            v[j] = (h2 * f[j] + left + right) / center;
        }
        Ok(())
    }

    /// Dense matrix of the operator, used for the exact coarsest-level solve.
    pub fn dense_matrix(&self) -> CMatrix {
        let inv_h2 = 1.0 / (self.mesh_width() * self.mesh_width());
        let diag = self.diagonal();
        let off = Complex64::new(-inv_h2, 0.0);
        match self.dimension {
            Dimension::One => {
                let n = self.intervals as usize - 1;
                CMatrix::from_fn(n, n, |i, j| {
                    if i == j {
                        diag
                    } else if i.abs_diff(j) == 1 {
                        off
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
            }
            Dimension::Two => {
                let n = self.intervals as usize - 1;
                let total = n * n;
                let mut a = CMatrix::zeros(total, total);
                for i in 0..n {
                    for j in 0..n {
                        let row = i * n + j;
                        a[(row, row)] = diag;
                        if i > 0 {
                            a[(row, row - n)] = off;
                        }
                        if i + 1 < n {
                            a[(row, row + n)] = off;
                        }
                        if j > 0 {
                            a[(row, row - 1)] = off;
                        }
                        if j + 1 < n {
                            a[(row, row + 1)] = off;
                        }
                    }
                }
                a
            }
        }
    }
}
