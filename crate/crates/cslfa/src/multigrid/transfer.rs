//! Intergrid transfer operators: full weighting restriction and linear
//! (bilinear) interpolation, as dual stencils on Dirichlet grids.

use super::grid::GridFunction;
use super::MultigridError;
use crate::symbols::Dimension;
use num_complex::Complex64;

/// Full weighting restriction: `1/4 [1 2 1]` in 1D and its tensor product
/// `1/16 [1 2 1; 2 4 2; 1 2 1]` in 2D. The fine grid must have an even
/// number of intervals with at least one interior coarse point.
pub fn restrict(fine: &GridFunction) -> Result<GridFunction, MultigridError> {
    let n = fine.intervals();
    if n % 2 != 0 || n < 4 {
        return Err(MultigridError::InvalidCycle {
            reason: "restriction requires an even grid with at least 4 intervals",
        });
    }
    let m = n / 2;
    let mut coarse = GridFunction::zeros(fine.dimension(), m);
    match fine.dimension() {
        Dimension::One => {
            let c = coarse.values_mut();
            for cj in 1..m {
                let j = 2 * cj;
                c[cj as usize - 1] =
                    0.25 * fine.at(j - 1) + 0.5 * fine.at(j) + 0.25 * fine.at(j + 1);
            }
        }
        Dimension::Two => {
            let stride = m as usize - 1;
            let c = coarse.values_mut();
            for ci in 1..m {
                for cj in 1..m {
                    let (i, j) = (2 * ci, 2 * cj);
                    let center = 0.25 * fine.at2(i, j);
                    let edges = 0.125
                        * (fine.at2(i - 1, j)
                            + fine.at2(i + 1, j)
                            + fine.at2(i, j - 1)
                            + fine.at2(i, j + 1));
                    let corners = 0.0625
                        * (fine.at2(i - 1, j - 1)
                            + fine.at2(i - 1, j + 1)
                            + fine.at2(i + 1, j - 1)
                            + fine.at2(i + 1, j + 1));
                    c[(ci as usize - 1) * stride + (cj as usize - 1)] = center + edges + corners;
                }
            }
        }
    }
    Ok(coarse)
}

/// Linear (bilinear) interpolation, the dual of full weighting: coincident
/// fine points copy the coarse value, midpoints average their neighbors.
pub fn prolong(coarse: &GridFunction) -> Result<GridFunction, MultigridError> {
    let m = coarse.intervals();
    let n = 2 * m;
    let mut fine = GridFunction::zeros(coarse.dimension(), n);
    match coarse.dimension() {
        Dimension::One => {
            let f = fine.values_mut();
            for cj in 1..m {
                let v = coarse.at(cj);
                let j = (2 * cj) as usize;
                f[j - 1] += v;
                f[j - 2] += 0.5 * v;
                f[j] += 0.5 * v;
            }
        }
        Dimension::Two => {
            let stride = n as usize - 1;
            let f = fine.values_mut();
            let mut add = |i: u32, j: u32, v: Complex64| {
                f[(i as usize - 1) * stride + (j as usize - 1)] += v;
            };
            for ci in 1..m {
                for cj in 1..m {
                    let v = coarse.at2(ci, cj);
                    let (i, j) = (2 * ci, 2 * cj);
                    add(i, j, v);
                    add(i - 1, j, 0.5 * v);
                    add(i + 1, j, 0.5 * v);
                    add(i, j - 1, 0.5 * v);
                    add(i, j + 1, 0.5 * v);
                    add(i - 1, j - 1, 0.25 * v);
                    add(i - 1, j + 1, 0.25 * v);
                    add(i + 1, j - 1, 0.25 * v);
                    add(i + 1, j + 1, 0.25 * v);
                }
            }
        }
    }
    Ok(fine)
}
