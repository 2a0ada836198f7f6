//! Exact points, half-open axis-aligned boxes and disjoint box unions.

use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// A point of `S^d`, ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Point<S>(pub Vec<S>);

impl<S: Scalar> Point<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Point(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![S::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| S::from_int(c)).collect())
    }

    /// Parse a comma-separated list of exact rationals, e.g. `"1/2,0"`.
    pub fn parse(text: &str) -> Result<Self> {
        let coords = text
            .split(',')
            .enumerate()
            .map(|(i, part)| {
                S::parse_exact(part).ok_or_else(|| Error::Parse {
                    location: format!("coordinate {i}"),
                    message: format!("invalid rational {:?}", part.trim()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Point(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Scalar::is_integer)
    }

    /// Coordinates where `self` differs from `center`.
    pub fn support_from(&self, center: &Self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.0[i] != center.0[i]).collect()
    }

    /// The unit cube `I + self`.
    pub fn unit_cube(&self) -> HalfOpenBox<S> {
        HalfOpenBox {
            lower: self.0.clone(),
            upper: self.0.iter().map(|c| c.clone() + S::one()).collect(),
        }
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            })
        }
    }
}

impl<S: Scalar> fmt::Display for Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<S: Scalar> Serialize for Point<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

/// Serialize a scalar as its canonical `p/q` string.
pub(crate) fn serialize_scalar<S: Scalar, Z: Serializer>(
    value: &S,
    serializer: Z,
) -> std::result::Result<Z::Ok, Z::Error> {
    serializer.serialize_str(&value.to_string())
}

/// Exact volume of `(I + u) ∩ (I + s)`: the product of `max(0, 1 - |s_i - u_i|)`.
pub fn overlap_volume<S: Scalar>(u: &Point<S>, s: &Point<S>) -> S {
    let mut vol = S::one();
    for (a, b) in u.0.iter().zip(&s.0) {
        let side = S::one() - (b.clone() - a.clone()).abs();
        if side <= S::zero() {
            return S::zero();
        }
        vol = vol * side;
    }
    vol
}

/// The half-open box `Π [lower_i, upper_i)`; never empty.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HalfOpenBox<S> {
    lower: Vec<S>,
    upper: Vec<S>,
}

impl<S: Scalar> HalfOpenBox<S> {
    pub fn new(lower: Vec<S>, upper: Vec<S>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if let Some(axis) = (0..lower.len()).find(|&i| lower[i] >= upper[i]) {
            return Err(Error::EmptyBox {
                axis,
                lower: lower[axis].to_string(),
                upper: upper[axis].to_string(),
            });
        }
        Ok(HalfOpenBox { lower, upper })
    }

    /// The unit cube `[0,1)^dim`.
    pub fn unit(dim: usize) -> Self {
        Point::origin(dim).unit_cube()
    }

    /// Parse `"a,b;c,d"`: the lower corner, a semicolon, then the upper corner.
    pub fn parse(text: &str) -> Result<Self> {
        let (lo, hi) = text.split_once(';').ok_or_else(|| Error::Parse {
            location: "window".into(),
            message: format!("expected \"lower;upper\", found {text:?}"),
        })?;
        let lo = Point::parse(lo)?;
        let hi = Point::parse(hi)?;
        HalfOpenBox::new(lo.0, hi.0)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[S] {
        &self.lower
    }

    pub fn upper(&self) -> &[S] {
        &self.upper
    }

    pub fn volume(&self) -> S {
        scalar::product(
            self.lower
                .iter()
                .zip(&self.upper)
                .map(|(l, u)| u.clone() - l.clone()),
        )
    }

    pub fn contains(&self, p: &Point<S>) -> bool {
        p.dim() == self.dim()
            && (0..self.dim()).all(|i| self.lower[i] <= p.0[i] && p.0[i] < self.upper[i])
    }

    /// Widen by `margin` on every side.
    pub fn padded(&self, margin: &S) -> Self {
        HalfOpenBox {
            lower: self.lower.iter().map(|l| l.clone() - margin.clone()).collect(),
            upper: self.upper.iter().map(|u| u.clone() + margin.clone()).collect(),
        }
    }

    /// Intersection, or `None` when some factor collapses.
    pub fn intersect(&self, other: &Self) -> Result<Option<Self>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let mut lower = Vec::with_capacity(self.dim());
        let mut upper = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let lo = (&self.lower[i]).max(&other.lower[i]).clone();
            let hi = (&self.upper[i]).min(&other.upper[i]).clone();
            if lo >= hi {
                return Ok(None);
            }
            lower.push(lo);
            upper.push(hi);
        }
        Ok(Some(HalfOpenBox { lower, upper }))
    }

    fn meets(&self, other: &Self) -> bool {
        (0..self.dim()).all(|i| self.lower[i] < other.upper[i] && other.lower[i] < self.upper[i])
    }

    /// `self \ cut` as disjoint boxes, split one coordinate at a time.
    fn minus(&self, cut: &Self) -> Vec<Self> {
        if !self.meets(cut) {
            return vec![self.clone()];
        }
        let mut pieces = Vec::new();
        let mut rest = self.clone();
        for i in 0..self.dim() {
            if rest.lower[i] < cut.lower[i] {
                let mut below = rest.clone();
                below.upper[i] = cut.lower[i].clone();
                rest.lower[i] = cut.lower[i].clone();
                pieces.push(below);
            }
            if cut.upper[i] < rest.upper[i] {
                let mut above = rest.clone();
                above.lower[i] = cut.upper[i].clone();
                rest.upper[i] = cut.upper[i].clone();
                pieces.push(above);
            }
        }
        pieces
    }
}

impl<S: Scalar> fmt::Display for HalfOpenBox<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "[{}, {})", self.lower[i], self.upper[i])?;
        }
        Ok(())
    }
}

impl<S: Scalar> Serialize for HalfOpenBox<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("HalfOpenBox", 2)?;
        st.serialize_field("lower", &Point(self.lower.clone()))?;
        st.serialize_field("upper", &Point(self.upper.clone()))?;
        st.end()
    }
}

/// A finite union of pairwise-disjoint half-open boxes, kept sorted.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(bound = "")]
pub struct BoxSet<S: Scalar> {
    dim: usize,
    parts: Vec<HalfOpenBox<S>>,
}

impl<S: Scalar> BoxSet<S> {
    pub fn empty(dim: usize) -> Self {
        BoxSet {
            dim,
            parts: Vec::new(),
        }
    }

    /// Union of arbitrary (possibly overlapping) boxes in canonical form.
    pub fn from_boxes(dim: usize, boxes: impl IntoIterator<Item = HalfOpenBox<S>>) -> Result<Self> {
        let mut set = BoxSet::empty(dim);
        for b in boxes {
            set.insert(b)?;
        }
        Ok(set)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parts(&self) -> &[HalfOpenBox<S>] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    fn check(&self, b: &HalfOpenBox<S>) -> Result<()> {
        if b.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: b.dim(),
            });
        }
        Ok(())
    }

    /// Add `b`, keeping parts disjoint: only `b \ self` is appended.
    pub fn insert(&mut self, b: HalfOpenBox<S>) -> Result<()> {
        self.check(&b)?;
        let mut fresh = vec![b];
        for part in &self.parts {
            fresh = fresh.into_iter().flat_map(|f| f.minus(part)).collect();
            if fresh.is_empty() {
                return Ok(());
            }
        }
        self.parts.extend(fresh);
        self.parts.sort();
        Ok(())
    }

    /// Exact set difference `self \ b`.
    pub fn subtract(&self, b: &HalfOpenBox<S>) -> Result<Self> {
        self.check(b)?;
        let mut parts: Vec<_> = self.parts.iter().flat_map(|p| p.minus(b)).collect();
        parts.sort();
        Ok(BoxSet {
            dim: self.dim,
            parts,
        })
    }

    pub fn intersect_box(&self, b: &HalfOpenBox<S>) -> Result<Self> {
        self.check(b)?;
        let mut parts = Vec::new();
        for p in &self.parts {
            if let Some(q) = p.intersect(b)? {
                parts.push(q);
            }
        }
        parts.sort();
        Ok(BoxSet {
            dim: self.dim,
            parts,
        })
    }

    pub fn volume(&self) -> S {
        scalar::sum(self.parts.iter().map(HalfOpenBox::volume))
    }

    pub fn contains(&self, p: &Point<S>) -> bool {
        self.parts.iter().any(|b| b.contains(p))
    }

    /// Rebuild from the current parts; a no-op on canonical input.
    pub fn canonicalize(&self) -> Result<Self> {
        BoxSet::from_boxes(self.dim, self.parts.iter().cloned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    fn bx(lo: &[(i64, i64)], hi: &[(i64, i64)]) -> HalfOpenBox<Q> {
        HalfOpenBox::new(
            lo.iter().map(|&(n, d)| q(n, d)).collect(),
            hi.iter().map(|&(n, d)| q(n, d)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn intersect_cases() {
        let unit = HalfOpenBox::<Q>::unit(2);
        assert_eq!(unit.intersect(&unit).unwrap(), Some(unit.clone()));
        let right = bx(&[(1, 1), (0, 1)], &[(2, 1), (1, 1)]);
        assert_eq!(unit.intersect(&right).unwrap(), None);
        let shifted = bx(&[(1, 2), (1, 2)], &[(3, 2), (3, 2)]);
        assert_eq!(
            unit.intersect(&shifted).unwrap(),
            Some(bx(&[(1, 2), (1, 2)], &[(1, 1), (1, 1)]))
        );
        assert!(matches!(
            unit.intersect(&HalfOpenBox::unit(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rejects_degenerate_boxes() {
        assert!(matches!(
            HalfOpenBox::new(vec![q(1, 1)], vec![q(1, 1)]),
            Err(Error::EmptyBox { .. })
        ));
        assert!(matches!(
            HalfOpenBox::<Q>::new(vec![], vec![]),
            Err(Error::ZeroDimension)
        ));
    }

    #[test]
    fn subtract_cases() {
        let big = BoxSet::from_boxes(2, [bx(&[(0, 1), (0, 1)], &[(2, 1), (2, 1)])]).unwrap();
        let rest = big.subtract(&HalfOpenBox::unit(2)).unwrap();
        assert_eq!(rest.parts().len(), 2);
        assert_eq!(rest.volume(), q(3, 1));

        let far = bx(&[(5, 1), (5, 1)], &[(6, 1), (6, 1)]);
        assert_eq!(big.subtract(&far).unwrap(), big);

        let line = BoxSet::from_boxes(1, [HalfOpenBox::unit(1)]).unwrap();
        let split = line.subtract(&bx(&[(1, 3)], &[(2, 3)])).unwrap();
        assert_eq!(
            split.parts(),
            &[bx(&[(0, 1)], &[(1, 3)]), bx(&[(2, 3)], &[(1, 1)])]
        );
    }

    #[test]
    fn volumes() {
        assert_eq!(BoxSet::from_boxes(3, [HalfOpenBox::<Q>::unit(3)]).unwrap().volume(), q(1, 1));
        assert_eq!(BoxSet::<Q>::empty(2).volume(), q(0, 1));
        let b = bx(&[(0, 1), (0, 1)], &[(1, 2), (1, 3)]);
        assert_eq!(BoxSet::from_boxes(2, [b]).unwrap().volume(), q(1, 6));
    }

    #[test]
    fn overlap_volume_cases() {
        let u = Point::<Q>::from_ints(&[0, 0]);
        assert_eq!(overlap_volume(&u, &u), q(1, 1));
        assert_eq!(overlap_volume(&u, &Point(vec![q(1, 2), q(1, 2)])), q(1, 4));
        assert_eq!(overlap_volume(&u, &Point::from_ints(&[1, 0])), q(0, 1));
    }

    #[test]
    fn overlapping_inserts_stay_disjoint() {
        let a = bx(&[(0, 1), (0, 1)], &[(2, 1), (2, 1)]);
        let b = bx(&[(1, 1), (1, 1)], &[(3, 1), (3, 1)]);
        let set = BoxSet::from_boxes(2, [a, b]).unwrap();
        assert_eq!(set.volume(), q(7, 1));
        for (i, p) in set.parts().iter().enumerate() {
            for r in &set.parts()[i + 1..] {
                assert_eq!(p.intersect(r).unwrap(), None);
            }
        }
    }

    #[test]
    fn window_parsing() {
        let w = HalfOpenBox::<Q>::parse("0,0;2,1/2").unwrap();
        assert_eq!(w, bx(&[(0, 1), (0, 1)], &[(2, 1), (1, 2)]));
        assert!(HalfOpenBox::<Q>::parse("0,0").is_err());
        assert!(HalfOpenBox::<Q>::parse("0,0;0,1").is_err());
    }
}
