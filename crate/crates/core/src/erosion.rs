//! Erosion of a box union by the unit cube: all `u` with `I + u ⊆ A`.
//!
//! The result is in general not a union of half-open boxes (two abutting cubes
//! erode to a closed segment), so it is reported as a [`FaceSet`] of products
//! of closed and open intervals.
//!
//! Per coordinate the breakpoints are the box endpoints together with the
//! endpoints shifted down by one. The predicate `I + u ⊆ A` is constant on
//! every relatively open face of that grid, so one representative per face
//! decides it. Each representative is resolved against an occupancy table over
//! the cells of the endpoint grid, with a summed-area table answering "is this
//! block of cells fully occupied" in `O(2^d)`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{BoxSet, HalfOpenBox, Point};
use crate::scalar::Scalar;

/// One factor of a [`Face`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Interval<S> {
    /// `[a, b]`, possibly the single point `a = b`.
    Closed(S, S),
    /// `(a, b)` with `a < b`.
    Open(S, S),
}

impl<S: Scalar> Interval<S> {
    pub fn contains(&self, x: &S) -> bool {
        match self {
            Interval::Closed(a, b) => a <= x && x <= b,
            Interval::Open(a, b) => a < x && x < b,
        }
    }

    /// A point of the interval: the lower end if closed, the midpoint if open.
    pub fn representative(&self) -> S {
        match self {
            Interval::Closed(a, _) => a.clone(),
            Interval::Open(a, b) => (a.clone() + b.clone()) * S::half(),
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Interval::Closed(a, b) if a == b)
    }
}

impl<S: Scalar> fmt::Display for Interval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Closed(a, b) if a == b => write!(f, "{{{a}}}"),
            Interval::Closed(a, b) => write!(f, "[{a}, {b}]"),
            Interval::Open(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

impl<S: Scalar> Serialize for Interval<S> {
    fn serialize<Z: serde::Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(1))?;
        match self {
            Interval::Closed(a, b) => {
                map.serialize_entry("closed", &[a.to_string(), b.to_string()])?
            }
            Interval::Open(a, b) => map.serialize_entry("open", &[a.to_string(), b.to_string()])?,
        }
        map.end()
    }
}

/// A product of intervals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
#[serde(bound = "")]
pub struct Face<S: Scalar> {
    pub factors: Vec<Interval<S>>,
}

impl<S: Scalar> Face<S> {
    pub fn contains(&self, p: &Point<S>) -> bool {
        p.dim() == self.factors.len() && self.factors.iter().zip(&p.0).all(|(f, x)| f.contains(x))
    }

    pub fn representative(&self) -> Point<S> {
        Point(self.factors.iter().map(Interval::representative).collect())
    }

    pub fn is_point(&self) -> bool {
        self.factors.iter().all(Interval::is_point)
    }
}

impl<S: Scalar> fmt::Display for Face<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

/// Pairwise-disjoint faces.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(bound = "")]
pub struct FaceSet<S: Scalar> {
    pub dim: usize,
    pub faces: Vec<Face<S>>,
}

impl<S: Scalar> FaceSet<S> {
    pub fn contains(&self, p: &Point<S>) -> bool {
        self.faces.iter().any(|f| f.contains(p))
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }
}

/// `{u ∈ window : I + u ⊆ set}`.
pub fn erode_by_unit_cube<S: Scalar>(set: &BoxSet<S>, window: &HalfOpenBox<S>) -> Result<FaceSet<S>> {
    let grid = erode_cells(set, window)?;
    Ok(grid.merge(grid.covered.clone()))
}

/// Erosion on the face grid, before merging faces.
pub(crate) struct ErodedGrid<S> {
    /// Sorted breakpoints per coordinate.
    pub breaks: Vec<Vec<S>>,
    /// Covered faces as per-axis face indices: `2j` is the point `breaks[j]`,
    /// `2j + 1` the open interval `(breaks[j], breaks[j + 1])`.
    pub covered: Vec<Vec<usize>>,
}

fn sorted_unique<S: Scalar>(mut v: Vec<S>) -> Vec<S> {
    v.sort();
    v.dedup();
    v
}

pub(crate) fn erode_cells<S: Scalar>(set: &BoxSet<S>, window: &HalfOpenBox<S>) -> Result<ErodedGrid<S>> {
    let dim = set.dim();
    if window.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: window.dim(),
        });
    }
    if set.is_empty() {
        return Ok(ErodedGrid {
            breaks: vec![Vec::new(); dim],
            covered: Vec::new(),
        });
    }

    let endpoints: Vec<Vec<S>> = (0..dim)
        .map(|i| {
            sorted_unique(
                set.parts()
                    .iter()
                    .flat_map(|b| [b.lower()[i].clone(), b.upper()[i].clone()])
                    .collect(),
            )
        })
        .collect();
    let breaks: Vec<Vec<S>> = (0..dim)
        .map(|i| {
            let mut g: Vec<S> = endpoints[i].clone();
            g.extend(endpoints[i].iter().map(|e| e.clone() - S::one()));
            g.push(window.lower()[i].clone());
            g.push(window.upper()[i].clone());
            sorted_unique(g)
        })
        .collect();

    let table = OccupancyTable::build(set, &endpoints);

    // Per axis: the window faces whose unit interval stays inside the endpoint
    // range, with the block of endpoint cells that interval touches.
    let mut axis_faces: Vec<Vec<(usize, usize, usize)>> = Vec::with_capacity(dim);
    for i in 0..dim {
        let g = &breaks[i];
        let e = &endpoints[i];
        let (wl, wh) = (&window.lower()[i], &window.upper()[i]);
        let mut faces = Vec::new();
        for idx in 0..(2 * g.len() - 1) {
            let j = idx / 2;
            let rep = if idx % 2 == 0 {
                if !(wl <= &g[j] && &g[j] < wh) {
                    continue;
                }
                g[j].clone()
            } else {
                if !(wl <= &g[j] && &g[j + 1] <= wh) {
                    continue;
                }
                (g[j].clone() + g[j + 1].clone()) * S::half()
            };
            let top = rep.clone() + S::one();
            if rep < e[0] || top > e[e.len() - 1] {
                continue;
            }
            let lo = e.partition_point(|x| x <= &rep) - 1;
            let hi = e.partition_point(|x| x < &top);
            faces.push((idx, lo, hi));
        }
        if faces.is_empty() {
            return Ok(ErodedGrid {
                breaks,
                covered: Vec::new(),
            });
        }
        axis_faces.push(faces);
    }

    let mut covered = Vec::new();
    let mut odometer = vec![0usize; dim];
    loop {
        let lo: Vec<usize> = (0..dim).map(|i| axis_faces[i][odometer[i]].1).collect();
        let hi: Vec<usize> = (0..dim).map(|i| axis_faces[i][odometer[i]].2).collect();
        if table.is_full(&lo, &hi) {
            covered.push((0..dim).map(|i| axis_faces[i][odometer[i]].0).collect());
        }
        let mut axis = dim;
        loop {
            if axis == 0 {
                return Ok(ErodedGrid { breaks, covered });
            }
            axis -= 1;
            odometer[axis] += 1;
            if odometer[axis] < axis_faces[axis].len() {
                break;
            }
            odometer[axis] = 0;
        }
    }
}

/// Summed-area table of occupied cells of the endpoint grid.
struct OccupancyTable {
    /// Cells per axis.
    shape: Vec<usize>,
    /// Prefix sums on the `(shape_i + 1)`-sized lattice, row-major.
    sums: Vec<u64>,
}

impl OccupancyTable {
    fn build<S: Scalar>(set: &BoxSet<S>, endpoints: &[Vec<S>]) -> Self {
        let dim = endpoints.len();
        let shape: Vec<usize> = endpoints.iter().map(|e| e.len() - 1).collect();
        let ext: Vec<usize> = shape.iter().map(|n| n + 1).collect();
        let total: usize = ext.iter().product();
        let mut sums = vec![0u64; total];

        for b in set.parts() {
            let ranges: Vec<(usize, usize)> = (0..dim)
                .map(|i| {
                    let e = &endpoints[i];
                    let lo = e.binary_search(&b.lower()[i]).expect("lower endpoint on grid");
                    let hi = e.binary_search(&b.upper()[i]).expect("upper endpoint on grid");
                    (lo, hi)
                })
                .collect();
            let mut cell: Vec<usize> = ranges.iter().map(|r| r.0).collect();
            'cells: loop {
                // shift by one so the table's zero row/column stays empty
                let idx = flat_index(&ext, cell.iter().map(|c| c + 1));
                sums[idx] = 1;
                let mut axis = dim;
                loop {
                    if axis == 0 {
                        break 'cells;
                    }
                    axis -= 1;
                    cell[axis] += 1;
                    if cell[axis] < ranges[axis].1 {
                        break;
                    }
                    cell[axis] = ranges[axis].0;
                }
            }
        }

        let mut stride = 1;
        for axis in (0..dim).rev() {
            for idx in 0..total {
                if (idx / stride) % ext[axis] != 0 {
                    sums[idx] += sums[idx - stride];
                }
            }
            stride *= ext[axis];
        }
        OccupancyTable { shape, sums }
    }

    /// Whether every cell in `Π [lo_i, hi_i)` is occupied.
    fn is_full(&self, lo: &[usize], hi: &[usize]) -> bool {
        let dim = self.shape.len();
        let ext: Vec<usize> = self.shape.iter().map(|n| n + 1).collect();
        let mut count: i64 = 0;
        for mask in 0..(1usize << dim) {
            let corner = (0..dim).map(|i| if mask >> i & 1 == 1 { lo[i] } else { hi[i] });
            let v = self.sums[flat_index(&ext, corner)] as i64;
            if mask.count_ones() % 2 == 0 {
                count += v;
            } else {
                count -= v;
            }
        }
        let want: usize = (0..dim).map(|i| hi[i] - lo[i]).product();
        count == want as i64
    }
}

fn flat_index(ext: &[usize], coords: impl Iterator<Item = usize>) -> usize {
    coords.zip(ext).fold(0, |acc, (c, n)| acc * n + c)
}

impl<S: Scalar> ErodedGrid<S> {
    /// Merge grid faces into larger closed or open products, axis by axis.
    pub fn merge(&self, cells: Vec<Vec<usize>>) -> FaceSet<S> {
        let dim = self.breaks.len();
        let mut runs: Vec<Vec<(usize, usize)>> = cells
            .into_iter()
            .map(|c| c.into_iter().map(|k| (k, k)).collect())
            .collect();
        for axis in 0..dim {
            runs.sort_by(|a, b| {
                let key = |r: &Vec<(usize, usize)>| {
                    let mut k: Vec<(usize, usize)> = r.clone();
                    let own = k.remove(axis);
                    (k, own)
                };
                key(a).cmp(&key(b))
            });
            let mut merged: Vec<Vec<(usize, usize)>> = Vec::with_capacity(runs.len());
            for run in runs {
                if let Some(last) = merged.last_mut() {
                    let same_rest = (0..dim).all(|i| i == axis || last[i] == run[i]);
                    if same_rest && last[axis].1 + 1 == run[axis].0 {
                        last[axis].1 = run[axis].1;
                        continue;
                    }
                }
                merged.push(run);
            }
            // A run must start and end on faces of the same kind to be a
            // closed or open interval; peel off the odd end otherwise.
            runs = Vec::with_capacity(merged.len());
            for run in merged {
                let (s, e) = run[axis];
                if s % 2 == e % 2 {
                    runs.push(run);
                } else if s % 2 == 0 {
                    let mut a = run.clone();
                    a[axis] = (s, e - 1);
                    let mut b = run;
                    b[axis] = (e, e);
                    runs.push(a);
                    runs.push(b);
                } else {
                    let mut a = run.clone();
                    a[axis] = (s, s);
                    let mut b = run;
                    b[axis] = (s + 1, e);
                    runs.push(a);
                    runs.push(b);
                }
            }
        }
        let mut faces: Vec<Face<S>> = runs
            .into_iter()
            .map(|run| Face {
                factors: run
                    .iter()
                    .enumerate()
                    .map(|(i, &(s, e))| {
                        let g = &self.breaks[i];
                        if s % 2 == 0 {
                            Interval::Closed(g[s / 2].clone(), g[e / 2].clone())
                        } else {
                            Interval::Open(g[s / 2].clone(), g[e / 2 + 1].clone())
                        }
                    })
                    .collect(),
            })
            .collect();
        faces.sort();
        FaceSet { dim, faces }
    }

    /// The point of a vertex face, when every factor index is a breakpoint.
    pub fn vertex(&self, cell: &[usize]) -> Option<Point<S>> {
        cell.iter()
            .all(|k| k % 2 == 0)
            .then(|| Point(cell.iter().enumerate().map(|(i, k)| self.breaks[i][k / 2].clone()).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn cubes(origins: &[&[i64]]) -> BoxSet<Q> {
        BoxSet::from_boxes(
            origins[0].len(),
            origins.iter().map(|o| Point::<Q>::from_ints(o).unit_cube()),
        )
        .unwrap()
    }

    fn wide(dim: usize) -> HalfOpenBox<Q> {
        HalfOpenBox::new(vec![q(-10); dim], vec![q(10); dim]).unwrap()
    }

    #[test]
    fn two_abutting_cubes_erode_to_closed_segment() {
        let a = cubes(&[&[0, 0], &[1, 0]]);
        let window = HalfOpenBox::new(vec![q(0), q(0)], vec![q(2), q(1)]).unwrap();
        let eroded = erode_by_unit_cube(&a, &window).unwrap();
        assert_eq!(
            eroded.faces,
            vec![Face {
                factors: vec![Interval::Closed(q(0), q(1)), Interval::Closed(q(0), q(0))]
            }]
        );
    }

    #[test]
    fn single_cube_erodes_to_its_origin() {
        for dim in 1..=4 {
            let a = BoxSet::from_boxes(dim, [HalfOpenBox::<Q>::unit(dim)]).unwrap();
            let eroded = erode_by_unit_cube(&a, &wide(dim)).unwrap();
            assert_eq!(eroded.faces.len(), 1);
            assert!(eroded.faces[0].is_point());
            assert_eq!(eroded.faces[0].representative(), Point::origin(dim));
        }
    }

    #[test]
    fn separated_cubes_erode_to_two_points() {
        let a = cubes(&[&[0, 0], &[3, 1]]);
        let eroded = erode_by_unit_cube(&a, &wide(2)).unwrap();
        let pts: Vec<_> = eroded.faces.iter().map(Face::representative).collect();
        assert_eq!(pts, vec![Point::from_ints(&[0, 0]), Point::from_ints(&[3, 1])]);
        assert!(eroded.faces.iter().all(Face::is_point));
    }

    #[test]
    fn half_open_run_is_split() {
        // [0,3) eroded to [0,2]; the window [0,2) cuts it to [0,2)
        let a = cubes(&[&[0], &[1], &[2]]);
        let window = HalfOpenBox::new(vec![q(0)], vec![q(2)]).unwrap();
        let eroded = erode_by_unit_cube(&a, &window).unwrap();
        assert!(eroded.contains(&Point::from_ints(&[0])));
        assert!(eroded.contains(&Point(vec![Q::ratio(3, 2)])));
        assert!(!eroded.contains(&Point::from_ints(&[2])));
        assert_eq!(eroded.faces.len(), 2);
    }

    #[test]
    fn empty_input() {
        let eroded = erode_by_unit_cube(&BoxSet::<Q>::empty(2), &wide(2)).unwrap();
        assert!(eroded.is_empty());
    }
}
