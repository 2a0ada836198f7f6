//! Test instances: structured tilings, seeded random tilings and packings.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{HalfOpenBox, Point};
use crate::packing::{cartesian, CubeSystem};
use crate::scalar::Scalar;

/// `I + Z^d` on the torus with periods `(2, ..., 2)`: all `2^d` integer origins.
pub fn lattice_tiling<S: Scalar>(dim: usize) -> Result<CubeSystem<S>> {
    if !(1..=6).contains(&dim) {
        return Err(Error::Usage(format!("lattice tiling needs 1 <= d <= 6, got {dim}")));
    }
    let mut origins = Vec::with_capacity(1 << dim);
    cartesian(&vec![vec![0i64, 1]; dim], &mut |c| origins.push(Point::from_ints(c)));
    CubeSystem::periodic(dim, origins, vec![2; dim])
}

/// Two columns along coordinate 1; the column at `x_0 = 1` is shifted by
/// `shift`. Remaining coordinates are the plain lattice. Periods `(2, ..., 2)`.
pub fn shifted_column_tiling<S: Scalar>(dim: usize, shift: &S) -> Result<CubeSystem<S>> {
    if !(2..=6).contains(&dim) {
        return Err(Error::Usage(format!("column tiling needs 2 <= d <= 6, got {dim}")));
    }
    if shift < &S::zero() || shift >= &S::one() {
        return Err(Error::Usage(format!("shift {shift} is outside [0, 1)")));
    }
    let mut origins = Vec::with_capacity(1 << dim);
    cartesian(&vec![vec![0i64, 1]; dim], &mut |c| {
        let mut p: Point<S> = Point::from_ints(c);
        if c[0] == 1 {
            p.0[1] = p.0[1].clone() + shift.clone();
        }
        origins.push(p);
    });
    origins.sort();
    CubeSystem::periodic(dim, origins, vec![2; dim])
}

/// Cell bookkeeping for the grid-aligned backtracking search.
struct CellGrid {
    sizes: Vec<usize>,
    strides: Vec<usize>,
    /// Offsets `a ∈ [0, grid)^d` of the cells inside one cube.
    offsets: Vec<Vec<usize>>,
}

impl CellGrid {
    fn new(periods: &[i64], grid: usize) -> Self {
        let sizes: Vec<usize> = periods.iter().map(|&p| p as usize * grid).collect();
        let mut strides = vec![1; sizes.len()];
        for i in (0..sizes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * sizes[i + 1];
        }
        let mut offsets = Vec::new();
        cartesian(&vec![(0..grid).collect::<Vec<_>>(); sizes.len()], &mut |a| offsets.push(a.to_vec()));
        CellGrid {
            sizes,
            strides,
            offsets,
        }
    }

    fn total(&self) -> usize {
        self.sizes.iter().product()
    }

    fn unflatten(&self, mut k: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|s| {
                let c = k / s;
                k %= s;
                c
            })
            .collect()
    }

    /// Flat indices of the cells covered by the cube with lower cell `corner`.
    fn cube_cells(&self, corner: &[usize]) -> Vec<usize> {
        self.offsets
            .iter()
            .map(|a| {
                (0..corner.len())
                    .map(|i| (corner[i] + a[i]) % self.sizes[i] * self.strides[i])
                    .sum()
            })
            .collect()
    }
}

/// A random torus tiling with origins on the `(1/grid) Z^d` lattice.
///
/// Repeatedly picks the first uncovered fine cell and tries, in seeded
/// random order, every grid-aligned cube that covers it and fits; backtracks
/// on dead ends. The integer lattice is always reachable, so the search only
/// fails if it is interrupted by the node budget.
pub fn random_torus_tiling<S: Scalar>(dim: usize, periods: &[i64], grid: usize, seed: u64) -> Result<CubeSystem<S>> {
    if !(1..=4).contains(&dim) {
        return Err(Error::Usage(format!("random tilings need 1 <= d <= 4, got {dim}")));
    }
    if periods.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: periods.len(),
        });
    }
    if let Some(axis) = periods.iter().position(|p| p % 2 != 0 || *p < 2) {
        return Err(Error::OddPeriod {
            axis,
            period: periods[axis],
        });
    }
    if !(1..=16).contains(&grid) {
        return Err(Error::Usage(format!("grid must be between 1 and 16, got {grid}")));
    }
    let cells = CellGrid::new(periods, grid);
    if cells.total() > 1 << 20 {
        return Err(Error::Usage("too many grid cells; lower the grid or the periods".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut filled = vec![false; cells.total()];
    // Each frame: the cube corner candidates for one uncovered cell, and the
    // position of the candidate currently placed.
    let mut stack: Vec<(Vec<Vec<usize>>, usize, Vec<usize>)> = Vec::new();
    let mut budget: u64 = 2_000_000;
    let mut next_cell = 0usize;

    loop {
        while next_cell < filled.len() && filled[next_cell] {
            next_cell += 1;
        }
        if next_cell == filled.len() {
            break;
        }
        let c = cells.unflatten(next_cell);
        let mut candidates: Vec<Vec<usize>> = cells
            .offsets
            .iter()
            .map(|a| (0..dim).map(|i| (c[i] + cells.sizes[i] - a[i]) % cells.sizes[i]).collect())
            .collect();
        candidates.shuffle(&mut rng);
        stack.push((candidates, 0, Vec::new()));

        // place the next fitting candidate, backtracking as needed
        loop {
            let Some((candidates, pos, placed)) = stack.last_mut() else {
                return Err(Error::SearchExhausted);
            };
            for &k in placed.iter() {
                filled[k] = false;
            }
            placed.clear();
            let mut found = false;
            while *pos < candidates.len() {
                budget = budget.checked_sub(1).ok_or(Error::SearchExhausted)?;
                let cube = cells.cube_cells(&candidates[*pos]);
                *pos += 1;
                if cube.iter().all(|&k| !filled[k]) {
                    for &k in &cube {
                        filled[k] = true;
                    }
                    *placed = cube;
                    found = true;
                    break;
                }
            }
            if found {
                break;
            }
            stack.pop();
        }
        next_cell = 0;
    }

    let mut origins: Vec<Point<S>> = stack
        .iter()
        .map(|(candidates, pos, _)| {
            Point(
                candidates[pos - 1]
                    .iter()
                    .map(|&k| S::ratio(k as i64, grid as i64))
                    .collect(),
            )
        })
        .collect();
    origins.sort();
    CubeSystem::periodic(dim, origins, periods.to_vec())
}

/// Keeps each cube independently with probability `keep`; never returns an
/// empty system.
pub fn random_subpacking<S: Scalar>(sys: &CubeSystem<S>, keep: f64, seed: u64) -> Result<CubeSystem<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut origins: Vec<Point<S>> = sys.origins().iter().filter(|_| rng.gen_bool(keep.clamp(0.0, 1.0))).cloned().collect();
    if origins.is_empty() {
        origins.push(sys.origins()[rng.gen_range(0..sys.origins().len())].clone());
    }
    sys.with_origins(origins)
}

/// A uniformly random point of `(1/denom) Z^d` inside `window`.
pub fn random_grid_point<S: Scalar, R: Rng>(window: &HalfOpenBox<S>, denom: i64, rng: &mut R) -> Point<S> {
    let d = S::from_int(denom);
    Point(
        window
            .lower()
            .iter()
            .zip(window.upper())
            .map(|(lo, hi)| {
                let first = ceil_i64(&(lo.clone() * d.clone()));
                let last = ceil_i64(&(hi.clone() * d.clone())) - 1;
                S::ratio(rng.gen_range(first..=last.max(first)), denom)
            })
            .collect(),
    )
}

fn ceil_i64<S: Scalar>(x: &S) -> i64 {
    -(-x.clone()).floor().to_i64_exact().expect("grid coordinate fits in i64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::{PackingStatus, TilingStatus};
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn lattice_sizes() {
        for d in 1..=3 {
            let sys = lattice_tiling::<Q>(d).unwrap();
            assert_eq!(sys.origins().len(), 1 << d);
            assert_eq!(sys.validate_torus_tiling().unwrap(), TilingStatus::Tiling);
        }
        assert!(lattice_tiling::<Q>(0).is_err());
        assert!(lattice_tiling::<Q>(7).is_err());
    }

    #[test]
    fn columns() {
        let sys = shifted_column_tiling(2, &Q::ratio(1, 2)).unwrap();
        assert!(sys.contains(&Point(vec![Q::from_int(1), Q::ratio(1, 2)])));
        assert_eq!(sys.validate_torus_tiling().unwrap(), TilingStatus::Tiling);
        assert_eq!(shifted_column_tiling(2, &Q::from_int(0)).unwrap(), lattice_tiling(2).unwrap());
        let sys = shifted_column_tiling(3, &Q::ratio(1, 2)).unwrap();
        assert_eq!(sys.origins().len(), 8);
        assert_eq!(sys.validate_torus_tiling().unwrap(), TilingStatus::Tiling);
        assert!(shifted_column_tiling(2, &Q::from_int(1)).is_err());
    }

    #[test]
    fn random_tilings_are_tilings() {
        for (d, grid) in [(1, 3), (2, 2), (2, 3), (3, 2)] {
            for seed in 0..5 {
                let sys = random_torus_tiling::<Q>(d, &vec![2; d], grid, seed).unwrap();
                assert_eq!(sys.validate_packing(), PackingStatus::Valid);
                assert_eq!(sys.validate_torus_tiling().unwrap(), TilingStatus::Tiling);
            }
        }
    }

    #[test]
    fn random_tilings_are_deterministic() {
        let a = random_torus_tiling::<Q>(2, &[2, 2], 2, 7).unwrap();
        let b = random_torus_tiling::<Q>(2, &[2, 2], 2, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.origins().len(), 4);
    }

    #[test]
    fn random_tilings_reject_odd_periods() {
        assert!(matches!(
            random_torus_tiling::<Q>(2, &[2, 3], 2, 0),
            Err(Error::OddPeriod { axis: 1, .. })
        ));
    }
}
