//! Complex-valued grid functions on the interior of the unit interval or
//! square with homogeneous Dirichlet boundary (implicit zero halo).

use super::MultigridError;
use crate::symbols::Dimension;
use num_complex::Complex64;
use rand::Rng;

/// Values at the interior points of an equidistant grid level: `N - 1`
/// points in 1D, `(N - 1)^2` in 2D (row-major), where `N` is the number of
/// grid intervals per dimension on this level.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    dimension: Dimension,
    intervals: u32,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn interior_len(dimension: Dimension, intervals: u32) -> usize {
        let per_dim = intervals as usize - 1;
        match dimension {
            Dimension::One => per_dim,
            Dimension::Two => per_dim * per_dim,
        }
    }

    pub fn zeros(dimension: Dimension, intervals: u32) -> Self {
        assert!(intervals >= 2);
        Self {
            dimension,
            intervals,
            values: vec![Complex64::new(0.0, 0.0); Self::interior_len(dimension, intervals)],
        }
    }

    pub fn from_values(
        dimension: Dimension,
        intervals: u32,
        values: Vec<Complex64>,
    ) -> Result<Self, MultigridError> {
        if values.len() != Self::interior_len(dimension, intervals) {
            return Err(MultigridError::GeometryMismatch {
                expected: Self::interior_len(dimension, intervals),
                got: values.len(),
            });
        }
        Ok(Self {
            dimension,
            intervals,
            values,
        })
    }

    /// Grid function with all interior values one.
    pub fn constant(dimension: Dimension, intervals: u32, value: Complex64) -> Self {
        let mut g = Self::zeros(dimension, intervals);
        g.values.fill(value);
        g
    }

    pub fn random(dimension: Dimension, intervals: u32, rng: &mut impl Rng) -> Self {
        let mut g = Self::zeros(dimension, intervals);
        for v in &mut g.values {
            *v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        g
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn intervals(&self) -> u32 {
        self.intervals
    }

    pub fn mesh_width(&self) -> f64 {
        1.0 / f64::from(self.intervals)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// Interior value at 1-based index `j` in 1D.
    pub fn at(&self, j: u32) -> Complex64 {
        debug_assert_eq!(self.dimension, Dimension::One);
        self.values[j as usize - 1]
    }

    /// Interior value at 1-based indices `(i, j)` in 2D.
    pub fn at2(&self, i: u32, j: u32) -> Complex64 {
        debug_assert_eq!(self.dimension, Dimension::Two);
        let per_dim = self.intervals as usize - 1;
        self.values[(i as usize - 1) * per_dim + (j as usize - 1)]
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product `sum conj(self_i) * other_i`.
    pub fn inner(&self, other: &GridFunction) -> Complex64 {
        debug_assert_eq!(self.values.len(), other.values.len());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.values {
            *v *= factor;
        }
    }

    /// `self += factor * other`.
    pub fn axpy(&mut self, factor: Complex64, other: &GridFunction) {
        debug_assert_eq!(self.values.len(), other.values.len());
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += factor * b;
        }
    }

    pub fn all_finite(&self) -> bool {
        self.values
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(super) fn same_geometry(&self, other: &GridFunction) -> Result<(), MultigridError> {
        if self.dimension != other.dimension || self.intervals != other.intervals {
            return Err(MultigridError::GeometryMismatch {
                expected: self.values.len(),
                got: other.values.len(),
            });
        }
        Ok(())
    }
}
