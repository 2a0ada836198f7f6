//! Packing and tiling instances, finite or periodic on a torus.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{overlap_volume, HalfOpenBox, Point};
use crate::scalar::{self, Scalar};

/// A set `S` of cube origins in `d` dimensions.
///
/// With `periods = Some(p)` the instance is the periodic set
/// `S₀ + Σ p_i Z e_i`, stored by its fundamental-domain representatives
/// `0 <= s_i < p_i`. Periods are integers `>= 2`, so a cube never meets its
/// own translates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CubeSystem<S: Scalar> {
    dim: usize,
    origins: Vec<Point<S>>,
    periods: Option<Vec<i64>>,
}

/// Outcome of [`CubeSystem::validate_packing`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "status")]
#[serde(bound = "")]
pub enum PackingStatus<S: Scalar> {
    Valid,
    /// Two cubes that overlap, as unfolded positions.
    OverlapViolation { first: Point<S>, second: Point<S> },
}

/// Outcome of [`CubeSystem::validate_torus_tiling`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "status")]
pub enum TilingStatus {
    Tiling,
    /// Missing volume per fundamental domain.
    NotTiling { deficit: i64 },
}

/// A neighbor `s` of a query point `u`, with `⟨s⟩ = {i : s_i ≠ u_i}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(bound = "")]
pub struct Neighbor<S: Scalar> {
    pub origin: Point<S>,
    pub support: Vec<usize>,
}

/// All cubes of a system that meet `I + center`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(bound = "")]
pub struct NeighborSet<S: Scalar> {
    pub center: Point<S>,
    pub members: Vec<Neighbor<S>>,
}

impl<S: Scalar> NeighborSet<S> {
    /// Offsets `s - u` of the members.
    pub fn offsets(&self) -> impl Iterator<Item = Point<S>> + '_ {
        self.members.iter().map(|m| m.origin.sub(&self.center))
    }

    pub fn contains_center(&self) -> bool {
        self.members.iter().any(|m| m.support.is_empty())
    }
}

impl<S: Scalar> CubeSystem<S> {
    /// A finite system.
    pub fn finite(dim: usize, origins: Vec<Point<S>>) -> Result<Self> {
        Self::build(dim, origins, None)
    }

    /// A periodic system; every origin must already lie in `Π [0, p_i)`.
    pub fn periodic(dim: usize, origins: Vec<Point<S>>, periods: Vec<i64>) -> Result<Self> {
        Self::build(dim, origins, Some(periods))
    }

    /// A periodic system, reducing each origin into the fundamental domain.
    pub fn periodic_reduced(dim: usize, origins: Vec<Point<S>>, periods: Vec<i64>) -> Result<Self> {
        check_periods(dim, &periods)?;
        let origins = origins.iter().map(|o| reduce(o, &periods)).collect();
        Self::build(dim, origins, Some(periods))
    }

    fn build(dim: usize, origins: Vec<Point<S>>, periods: Option<Vec<i64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if origins.is_empty() {
            return Err(Error::InvalidInstance("the origin set is empty".into()));
        }
        for o in &origins {
            o.check_dim(dim)?;
        }
        if let Some(p) = &periods {
            check_periods(dim, p)?;
            for o in &origins {
                if let Some(i) = (0..dim).find(|&i| o.0[i] < S::zero() || o.0[i] >= S::from_int(p[i])) {
                    return Err(Error::InvalidInstance(format!(
                        "origin {o} lies outside the fundamental domain in coordinate {i}"
                    )));
                }
            }
        }
        let mut seen = HashSet::with_capacity(origins.len());
        for o in &origins {
            if !seen.insert(o) {
                return Err(Error::InvalidInstance(format!("duplicate origin {o}")));
            }
        }
        Ok(CubeSystem {
            dim,
            origins,
            periods,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn origins(&self) -> &[Point<S>] {
        &self.origins
    }

    pub fn periods(&self) -> Option<&[i64]> {
        self.periods.as_deref()
    }

    pub fn is_periodic(&self) -> bool {
        self.periods.is_some()
    }

    /// Same periods (if any), different origins.
    pub fn with_origins(&self, origins: Vec<Point<S>>) -> Result<Self> {
        Self::build(self.dim, origins, self.periods.clone())
    }

    /// Reduce a point into the fundamental domain (identity for finite systems).
    pub fn reduce(&self, p: &Point<S>) -> Point<S> {
        match &self.periods {
            Some(periods) => reduce(p, periods),
            None => p.clone(),
        }
    }

    /// Membership in `S`, modulo the periods.
    pub fn contains(&self, p: &Point<S>) -> bool {
        p.dim() == self.dim && self.origins.contains(&self.reduce(p))
    }

    /// Membership lookup table for repeated queries.
    pub fn member_set(&self) -> MemberSet<'_, S> {
        MemberSet {
            system: self,
            set: self.origins.iter().collect(),
        }
    }

    /// Translate every origin by `-anchor`, so `anchor` becomes the origin.
    pub fn translated_to(&self, anchor: &Point<S>) -> Result<Self> {
        anchor.check_dim(self.dim)?;
        let shifted = self.origins.iter().map(|o| o.sub(anchor)).collect();
        match &self.periods {
            Some(p) => Self::periodic_reduced(self.dim, shifted, p.clone()),
            None => Self::finite(self.dim, shifted),
        }
    }

    /// The same periodic set with every period doubled.
    pub fn with_doubled_periods(&self) -> Result<Self> {
        let periods = self.periods.as_ref().ok_or(Error::NotPeriodic)?;
        let mut origins = Vec::with_capacity(self.origins.len() << self.dim);
        for mask in 0..(1usize << self.dim) {
            for o in &self.origins {
                origins.push(Point(
                    (0..self.dim)
                        .map(|i| {
                            if mask >> i & 1 == 1 {
                                o.0[i].clone() + S::from_int(periods[i])
                            } else {
                                o.0[i].clone()
                            }
                        })
                        .collect(),
                ));
            }
        }
        origins.sort();
        Self::periodic(self.dim, origins, periods.iter().map(|p| 2 * p).collect())
    }

    /// Checks that the cubes are pairwise disjoint.
    ///
    /// Origins are bucketed by the floor of their coordinates; two cubes can
    /// only overlap when their buckets differ by at most one per coordinate.
    /// Small instances in high dimension use the all-pairs scan instead.
    pub fn validate_packing(&self) -> PackingStatus<S> {
        let n = self.origins.len();
        let neighborhood = 3usize.saturating_pow(self.dim as u32);
        let violation = if n <= neighborhood {
            self.all_pairs_violation()
        } else {
            self.bucketed_violation()
        };
        match violation {
            None => PackingStatus::Valid,
            Some((a, b)) => {
                let first = self.origins[a].clone();
                let second = self.nearest_image(&self.origins[b], &first);
                PackingStatus::OverlapViolation { first, second }
            }
        }
    }

    fn all_pairs_violation(&self) -> Option<(usize, usize)> {
        let n = self.origins.len();
        for a in 0..n {
            for b in a + 1..n {
                if !self.separated(&self.origins[a], &self.origins[b]) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    fn bucketed_violation(&self) -> Option<(usize, usize)> {
        let mut buckets: HashMap<Vec<S>, Vec<usize>> = HashMap::new();
        for (idx, o) in self.origins.iter().enumerate() {
            let key = o.0.iter().map(Scalar::floor).collect();
            buckets.entry(key).or_default().push(idx);
        }
        let offsets = self.bucket_offsets();
        for (key, members) in &buckets {
            for offset in &offsets {
                let other_key = self.shift_bucket(key, offset);
                let Some(others) = buckets.get(&other_key) else {
                    continue;
                };
                for &a in members {
                    for &b in others {
                        if a < b && !self.separated(&self.origins[a], &self.origins[b]) {
                            return Some((a, b));
                        }
                    }
                }
            }
        }
        None
    }

    fn bucket_offsets(&self) -> Vec<Vec<i64>> {
        let mut offsets = vec![Vec::new()];
        for _ in 0..self.dim {
            offsets = offsets
                .into_iter()
                .flat_map(|o| {
                    [-1i64, 0, 1].into_iter().map(move |d| {
                        let mut next = o.clone();
                        next.push(d);
                        next
                    })
                })
                .collect();
        }
        offsets
    }

    fn shift_bucket(&self, key: &[S], offset: &[i64]) -> Vec<S> {
        key.iter()
            .zip(offset)
            .enumerate()
            .map(|(i, (k, &d))| {
                let shifted = k.clone() + S::from_int(d);
                match &self.periods {
                    Some(p) => shifted.rem_euclid(&S::from_int(p[i])),
                    None => shifted,
                }
            })
            .collect()
    }

    /// Some coordinate separates the two cubes (modulo the periods).
    fn separated(&self, a: &Point<S>, b: &Point<S>) -> bool {
        (0..self.dim).any(|i| {
            let diff = a.0[i].clone() - b.0[i].clone();
            match &self.periods {
                None => diff.abs() >= S::one(),
                Some(p) => {
                    let period = S::from_int(p[i]);
                    let fwd = diff.rem_euclid(&period);
                    fwd >= S::one() && period - fwd >= S::one()
                }
            }
        })
    }

    /// The translate of `p` closest to `target` coordinatewise.
    fn nearest_image(&self, p: &Point<S>, target: &Point<S>) -> Point<S> {
        let Some(periods) = &self.periods else {
            return p.clone();
        };
        Point(
            (0..self.dim)
                .map(|i| {
                    let period = S::from_int(periods[i]);
                    let mut x = target.0[i].clone() + (p.0[i].clone() - target.0[i].clone()).rem_euclid(&period);
                    if x.clone() - target.0[i].clone() > period.clone() * S::half() {
                        x = x - period;
                    }
                    x
                })
                .collect(),
        )
    }

    /// On a torus a packing tiles iff it has `Π p_i` cubes per domain.
    pub fn validate_torus_tiling(&self) -> Result<TilingStatus> {
        let periods = self.periods.as_ref().ok_or(Error::NotPeriodic)?;
        if let PackingStatus::OverlapViolation { first, second } = self.validate_packing() {
            return Err(Error::NotPacking {
                first: first.to_string(),
                second: second.to_string(),
            });
        }
        let volume: i64 = periods.iter().product();
        let count = self.origins.len() as i64;
        Ok(if count == volume {
            TilingStatus::Tiling
        } else {
            TilingStatus::NotTiling {
                deficit: volume - count,
            }
        })
    }

    /// Errors unless the system is a periodic tiling.
    pub fn require_tiling(&self) -> Result<()> {
        match self.validate_torus_tiling()? {
            TilingStatus::Tiling => Ok(()),
            TilingStatus::NotTiling { deficit } => Err(Error::NotTiling {
                deficit: deficit.to_string(),
            }),
        }
    }

    /// Errors unless the cubes are disjoint.
    pub fn require_packing(&self) -> Result<()> {
        match self.validate_packing() {
            PackingStatus::Valid => Ok(()),
            PackingStatus::OverlapViolation { first, second } => Err(Error::NotPacking {
                first: first.to_string(),
                second: second.to_string(),
            }),
        }
    }

    /// All origins (unfolded over the periods) lying in the half-open window.
    pub fn unfold(&self, window: &HalfOpenBox<S>) -> Result<Vec<Point<S>>> {
        if window.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: window.dim(),
            });
        }
        let Some(periods) = &self.periods else {
            let mut pts: Vec<_> = self.origins.iter().filter(|o| window.contains(o)).cloned().collect();
            pts.sort();
            return Ok(pts);
        };
        let mut out = Vec::new();
        for o in &self.origins {
            // per coordinate, the values o_i + m p_i inside [lower_i, upper_i)
            let mut choices: Vec<Vec<S>> = Vec::with_capacity(self.dim);
            for i in 0..self.dim {
                let period = S::from_int(periods[i]);
                let first = window.lower()[i].clone()
                    + (o.0[i].clone() - window.lower()[i].clone()).rem_euclid(&period);
                let mut vals = Vec::new();
                let mut x = first;
                while x < window.upper()[i] {
                    vals.push(x.clone());
                    x = x + period.clone();
                }
                choices.push(vals);
            }
            cartesian(&choices, &mut |coords| out.push(Point(coords.to_vec())));
        }
        out.sort();
        Ok(out)
    }

    /// The unfolded origins `s` with `|s_i - u_i| < 1` for all `i`.
    pub fn neighbors(&self, u: &Point<S>) -> Result<NeighborSet<S>> {
        u.check_dim(self.dim)?;
        let mut members = Vec::new();
        for o in &self.origins {
            let image = match &self.periods {
                None => Some(o.clone()),
                Some(periods) => self.image_near(o, u, periods),
            };
            if let Some(s) = image {
                if (0..self.dim).all(|i| (s.0[i].clone() - u.0[i].clone()).abs() < S::one()) {
                    let support = s.support_from(u);
                    members.push(Neighbor { origin: s, support });
                }
            }
        }
        members.sort_by(|a, b| a.origin.cmp(&b.origin));
        Ok(NeighborSet {
            center: u.clone(),
            members,
        })
    }

    /// The unique translate of `o` within distance `< 1` of `u` per coordinate, if any.
    fn image_near(&self, o: &Point<S>, u: &Point<S>, periods: &[i64]) -> Option<Point<S>> {
        let mut coords = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let period = S::from_int(periods[i]);
            // smallest translate strictly above u_i - 1
            let lower = u.0[i].clone() - S::one();
            let mut x = lower.clone() + (o.0[i].clone() - lower.clone()).rem_euclid(&period);
            if x == lower {
                x = x + period;
            }
            if x.clone() - u.0[i].clone() >= S::one() {
                return None;
            }
            coords.push(x);
        }
        Some(Point(coords))
    }

    /// `Σ_s vol((I + u) ∩ (I + s))` over the neighbors of `u`.
    pub fn covered_volume(&self, u: &Point<S>) -> Result<S> {
        let nb = self.neighbors(u)?;
        Ok(scalar::sum(nb.members.iter().map(|m| overlap_volume(u, &m.origin))))
    }
}

/// Hash-based membership modulo the periods.
pub struct MemberSet<'a, S: Scalar> {
    system: &'a CubeSystem<S>,
    set: HashSet<&'a Point<S>>,
}

impl<S: Scalar> MemberSet<'_, S> {
    pub fn contains(&self, p: &Point<S>) -> bool {
        p.dim() == self.system.dim && self.set.contains(&self.system.reduce(p))
    }
}

fn check_periods(dim: usize, periods: &[i64]) -> Result<()> {
    if periods.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: periods.len(),
        });
    }
    if let Some(i) = periods.iter().position(|&p| p < 2) {
        return Err(Error::InvalidInstance(format!(
            "period {} in coordinate {i} is below 2",
            periods[i]
        )));
    }
    Ok(())
}

fn reduce<S: Scalar>(p: &Point<S>, periods: &[i64]) -> Point<S> {
    Point(
        p.0.iter()
            .zip(periods)
            .map(|(x, &m)| x.rem_euclid(&S::from_int(m)))
            .collect(),
    )
}

pub(crate) fn cartesian<T: Clone>(choices: &[Vec<T>], visit: &mut impl FnMut(&[T])) {
    fn go<T: Clone>(choices: &[Vec<T>], acc: &mut Vec<T>, visit: &mut impl FnMut(&[T])) {
        if acc.len() == choices.len() {
            visit(acc);
            return;
        }
        for c in &choices[acc.len()] {
            acc.push(c.clone());
            go(choices, acc, visit);
            acc.pop();
        }
    }
    go(choices, &mut Vec::with_capacity(choices.len()), visit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn pt(coords: &[(i64, i64)]) -> Point<Q> {
        Point(coords.iter().map(|&(n, d)| Q::ratio(n, d)).collect())
    }

    fn ints(coords: &[i64]) -> Point<Q> {
        Point::from_ints(coords)
    }

    fn four_cube_torus() -> CubeSystem<Q> {
        CubeSystem::periodic(
            2,
            vec![ints(&[0, 0]), ints(&[1, 0]), ints(&[0, 1]), ints(&[1, 1])],
            vec![2, 2],
        )
        .unwrap()
    }

    #[test]
    fn packing_examples() {
        let ok = CubeSystem::finite(2, vec![ints(&[0, 0]), ints(&[1, 0])]).unwrap();
        assert_eq!(ok.validate_packing(), PackingStatus::Valid);
        let bad = CubeSystem::finite(2, vec![ints(&[0, 0]), pt(&[(1, 2), (1, 2)])]).unwrap();
        assert!(matches!(bad.validate_packing(), PackingStatus::OverlapViolation { .. }));
        assert_eq!(four_cube_torus().validate_packing(), PackingStatus::Valid);
    }

    #[test]
    fn periodic_overlap_across_the_seam() {
        // 3/2 and 0 are 1/2 apart modulo 2
        let sys = CubeSystem::periodic(1, vec![ints(&[0]), pt(&[(3, 2)])], vec![2]).unwrap();
        match sys.validate_packing() {
            PackingStatus::OverlapViolation { first, second } => {
                assert_eq!(first, ints(&[0]));
                assert_eq!(second, pt(&[(-1, 2)]));
            }
            PackingStatus::Valid => panic!("expected overlap"),
        }
    }

    #[test]
    fn bucketed_path_matches_all_pairs() {
        let mut origins: Vec<_> = (0..12).map(|k| ints(&[k])).collect();
        let sys = CubeSystem::finite(1, origins.clone()).unwrap();
        assert_eq!(sys.validate_packing(), PackingStatus::Valid);
        origins.push(pt(&[(11, 2)]));
        let sys = CubeSystem::finite(1, origins).unwrap();
        assert!(matches!(sys.validate_packing(), PackingStatus::OverlapViolation { .. }));
    }

    #[test]
    fn tiling_examples() {
        assert_eq!(four_cube_torus().validate_torus_tiling().unwrap(), TilingStatus::Tiling);
        let three = CubeSystem::periodic(2, vec![ints(&[0, 0]), ints(&[1, 0]), ints(&[0, 1])], vec![2, 2]).unwrap();
        assert_eq!(three.validate_torus_tiling().unwrap(), TilingStatus::NotTiling { deficit: 1 });
        let staggered = CubeSystem::periodic(
            2,
            vec![ints(&[0, 0]), ints(&[1, 0]), pt(&[(1, 2), (1, 1)]), pt(&[(3, 2), (1, 1)])],
            vec![2, 2],
        )
        .unwrap();
        assert_eq!(staggered.validate_torus_tiling().unwrap(), TilingStatus::Tiling);
        let finite = CubeSystem::finite(1, vec![ints(&[0])]).unwrap();
        assert_eq!(finite.validate_torus_tiling(), Err(Error::NotPeriodic));
    }

    #[test]
    fn construction_errors() {
        assert!(CubeSystem::finite(2, vec![ints(&[0, 0]), ints(&[0, 0])]).is_err());
        assert!(CubeSystem::periodic(1, vec![ints(&[2])], vec![2]).is_err());
        assert!(CubeSystem::periodic(1, vec![ints(&[0])], vec![1]).is_err());
        assert_eq!(CubeSystem::<Q>::finite(0, vec![Point(vec![])]), Err(Error::ZeroDimension));
        let reduced = CubeSystem::periodic_reduced(1, vec![ints(&[5])], vec![2]).unwrap();
        assert_eq!(reduced.origins(), &[ints(&[1])]);
    }

    #[test]
    fn unfold_examples() {
        let w = HalfOpenBox::new(vec![Q::from_int(0); 2], vec![Q::from_int(4); 2]).unwrap();
        assert_eq!(four_cube_torus().unfold(&w).unwrap().len(), 16);
        let far = HalfOpenBox::new(vec![Q::from_int(10); 2], vec![Q::from_int(11); 2]).unwrap();
        let finite = CubeSystem::finite(2, vec![ints(&[0, 0])]).unwrap();
        assert!(finite.unfold(&far).unwrap().is_empty());
        let columns = CubeSystem::periodic(
            2,
            vec![ints(&[0, 0]), ints(&[0, 1]), pt(&[(1, 1), (1, 2)]), pt(&[(1, 1), (3, 2)])],
            vec![2, 2],
        )
        .unwrap();
        let w2 = HalfOpenBox::new(vec![Q::from_int(0); 2], vec![Q::from_int(2); 2]).unwrap();
        assert_eq!(columns.unfold(&w2).unwrap().len(), 4);
    }

    #[test]
    fn neighbor_examples() {
        let pair = CubeSystem::finite(1, vec![pt(&[(-1, 2)]), pt(&[(1, 2)])]).unwrap();
        let nb = pair.neighbors(&ints(&[0])).unwrap();
        assert_eq!(nb.members.len(), 2);
        assert!(nb.members.iter().all(|m| m.support == vec![0]));

        let torus = four_cube_torus();
        let nb = torus.neighbors(&ints(&[1, 1])).unwrap();
        assert_eq!(nb.members.len(), 1);
        assert!(nb.members[0].support.is_empty());

        let quad = CubeSystem::finite(
            2,
            vec![pt(&[(-1, 2), (-1, 2)]), pt(&[(1, 2), (-1, 2)]), pt(&[(-1, 2), (1, 2)]), pt(&[(1, 2), (1, 2)])],
        )
        .unwrap();
        let nb = quad.neighbors(&ints(&[0, 0])).unwrap();
        assert_eq!(nb.members.len(), 4);
        assert!(nb.members.iter().all(|m| m.support == vec![0, 1]));
    }

    #[test]
    fn periodic_neighbors_wrap() {
        let nb = four_cube_torus().neighbors(&pt(&[(-1, 2), (7, 2)])).unwrap();
        let origins: Vec<_> = nb.members.iter().map(|m| m.origin.clone()).collect();
        assert_eq!(
            origins,
            vec![ints(&[-1, 3]), ints(&[-1, 4]), ints(&[0, 3]), ints(&[0, 4])]
        );
        assert_eq!(four_cube_torus().covered_volume(&pt(&[(-1, 2), (7, 2)])).unwrap(), Q::from_int(1));
    }

    #[test]
    fn doubled_periods() {
        let doubled = four_cube_torus().with_doubled_periods().unwrap();
        assert_eq!(doubled.periods(), Some(&[4, 4][..]));
        assert_eq!(doubled.origins().len(), 16);
        assert_eq!(doubled.validate_torus_tiling().unwrap(), TilingStatus::Tiling);
    }
}
