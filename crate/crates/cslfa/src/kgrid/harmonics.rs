//! Harmonic frequency sets and the recursive frequency-splitting tree.
//!
//! A low frequency `theta0` in (-pi/2, pi/2] and its complement
//! `theta1 = theta0 - sign(theta0)*pi` alias to the single coarse mode
//! `2*theta0` after one coarsening; in 2D the complement is taken per
//! component, giving four harmonics per split. Descending one level splits
//! each mode `phi` into the harmonic pair (quad) of `phi/2`, which is how
//! the k-grid eigenmatrix bases are generated.

use super::KGridError;
use crate::symbols::{normalize_angle, Frequency};
use std::f64::consts::PI;

/// The harmonics of one base frequency: all fine-grid modes that coincide
/// with the coarse mode `2*theta0` on the coarser grid. Base first; in 2D
/// the order is base, first component shifted, second component shifted,
/// both shifted.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSet {
    pub base: Frequency,
    pub members: Vec<Frequency>,
}

impl HarmonicSet {
    /// Frequency of the single coarse-grid mode the members alias to.
    pub fn coarse(&self) -> Frequency {
        self.base.scaled(2.0).normalized()
    }
}

/// Complementary frequency with the `sign(0) := +1` convention, normalized
/// into (-pi, pi].
fn complement(theta: f64) -> f64 {
    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
    normalize_angle(theta - sign * PI)
}

fn check_base_component(value: f64) -> Result<(), KGridError> {
    if value > -PI / 2.0 && value <= PI / 2.0 {
        Ok(())
    } else {
        Err(KGridError::FrequencyOutOfRange { value })
    }
}

/// The 2 (1D) or 4 (2D) harmonics of a base frequency in (-pi/2, pi/2]^d.
pub fn harmonics(theta0: Frequency) -> Result<HarmonicSet, KGridError> {
    let members = match theta0 {
        Frequency::One(t) => {
            check_base_component(t)?;
            vec![Frequency::One(t), Frequency::One(complement(t))]
        }
        Frequency::Two(t1, t2) => {
            check_base_component(t1)?;
            check_base_component(t2)?;
            vec![
                Frequency::Two(t1, t2),
                Frequency::Two(complement(t1), t2),
                Frequency::Two(t1, complement(t2)),
                Frequency::Two(complement(t1), complement(t2)),
            ]
        }
    };
    Ok(HarmonicSet {
        base: theta0,
        members,
    })
}

/// Per-level frequency lists for a k-grid analysis with base `theta0`,
/// which is interpreted as a level-(k-1) low frequency.
///
/// `lists[l-1]` holds the level-`l` frequencies; the finest list has
/// `2^(k-1)` (1D) or `4^(k-1)` (2D) members and the coarsest exactly one.
/// Children of coarse member `g` occupy the contiguous fine index range
/// `[g*s, (g+1)*s)` with `s` the number of harmonics per split, so group
/// membership of fine index `i` is `i / s`.
pub(super) fn frequency_tree(
    levels: u32,
    theta0: Frequency,
) -> Result<Vec<Vec<Frequency>>, KGridError> {
    let k = levels as usize;
    debug_assert!(k >= 2);
    let mut lists: Vec<Vec<Frequency>> = vec![Vec::new(); k];
    let top = harmonics(theta0)?;
    lists[k - 1] = vec![top.coarse()];
    lists[k - 2] = top.members;
    for l in (0..k.saturating_sub(2)).rev() {
        let mut fine = Vec::with_capacity(lists[l + 1].len() * theta0.dimension().harmonics_per_split());
        for &phi in &lists[l + 1] {
            fine.extend(harmonics(phi.scaled(0.5))?.members);
        }
        lists[l] = fine;
    }
    Ok(lists)
}
