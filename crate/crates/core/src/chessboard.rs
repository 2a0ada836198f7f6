//! Splitting a packing into two rough parts.
//!
//! Origins are grouped into integer-translation classes (`s ~ t` iff
//! `s - t ∈ Z^d`). Within a class, `s ≈ t` when an even number of coordinates
//! of `s - t` are odd. A class is either a single `≈` class or splits into two
//! colors. Taking one color of every split class, plus whole unsplit classes,
//! leaves no odd twin pair inside either part, so both parts pass the parity
//! certificate and are rough.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::packing::CubeSystem;
use crate::rigidity::{parity_certificate, parity_certificate_system};
use crate::scalar::Scalar;

/// Origins sharing a fractional-part vector.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(bound = "")]
pub struct TranslationClass<S: Scalar> {
    /// Lexicographically smallest member.
    pub representative: Point<S>,
    /// Sorted members.
    pub members: Vec<Point<S>>,
    /// Color of each member, parallel to `members`.
    pub colors: Vec<u8>,
    pub splits: bool,
}

impl<S: Scalar> TranslationClass<S> {
    pub fn color_of(&self, p: &Point<S>) -> Option<u8> {
        self.members.binary_search(p).ok().map(|k| self.colors[k])
    }

    /// Colors relative to another member instead of the representative.
    pub fn colors_relative_to(&self, base: &Point<S>) -> Vec<u8> {
        self.members.iter().map(|m| parity_color(m, base)).collect()
    }
}

/// The split `S = S0 ⊔ S1`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(bound = "")]
pub struct Decomposition<S: Scalar> {
    #[serde(rename = "S0")]
    pub s0: Vec<Point<S>>,
    #[serde(rename = "S1")]
    pub s1: Vec<Point<S>>,
    pub classes: Vec<TranslationClass<S>>,
}

impl<S: Scalar> Decomposition<S> {
    /// Part 0 or 1 as a system with the parent's periods; `None` when empty.
    pub fn part_system(&self, parent: &CubeSystem<S>, part: usize) -> Result<Option<CubeSystem<S>>> {
        let origins = if part == 0 { &self.s0 } else { &self.s1 };
        if origins.is_empty() {
            return Ok(None);
        }
        parent.with_origins(origins.clone()).map(Some)
    }

    pub fn part_of(&self, p: &Point<S>) -> Option<usize> {
        if self.s0.binary_search(p).is_ok() {
            Some(0)
        } else if self.s1.binary_search(p).is_ok() {
            Some(1)
        } else {
            None
        }
    }
}

fn is_odd<S: Scalar>(x: &S) -> bool {
    !(x.clone() * S::half()).is_integer()
}

/// Parity of the number of odd coordinates of the integer vector `p - base`.
fn parity_color<S: Scalar>(p: &Point<S>, base: &Point<S>) -> u8 {
    let odd = p.sub(base).0.iter().filter(|c| is_odd(*c)).count();
    (odd % 2) as u8
}

/// Partition by fractional parts, colored by the even-parity relation.
/// Classes come out sorted by representative.
pub fn translation_classes<S: Scalar>(origins: &[Point<S>]) -> Vec<TranslationClass<S>> {
    let mut groups: BTreeMap<Vec<S>, Vec<Point<S>>> = BTreeMap::new();
    for o in origins {
        let key = o.0.iter().map(Scalar::frac_part).collect();
        groups.entry(key).or_default().push(o.clone());
    }
    let mut classes: Vec<TranslationClass<S>> = groups
        .into_values()
        .map(|mut members| {
            members.sort();
            members.dedup();
            let representative = members[0].clone();
            let colors: Vec<u8> = members.iter().map(|m| parity_color(m, &representative)).collect();
            let splits = colors.contains(&0) && colors.contains(&1);
            TranslationClass {
                representative,
                members,
                colors,
                splits,
            }
        })
        .collect();
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    classes
}

/// The chessboard decomposition.
///
/// Split classes contribute color 0 to `S0` and color 1 to `S1`; unsplit
/// classes alternate between the parts in sorted class order, starting with
/// `S0`. Periodic systems need even periods so that coordinate parity is
/// well defined on the torus.
pub fn chessboard_decompose<S: Scalar>(sys: &CubeSystem<S>) -> Result<Decomposition<S>> {
    if let Some(periods) = sys.periods() {
        if let Some(axis) = periods.iter().position(|p| p % 2 != 0) {
            return Err(Error::OddPeriod {
                axis,
                period: periods[axis],
            });
        }
    }
    sys.require_packing()?;

    let classes = translation_classes(sys.origins());
    let mut s0 = Vec::new();
    let mut s1 = Vec::new();
    let mut next_unsplit = 0usize;
    for class in &classes {
        if class.splits {
            for (m, &c) in class.members.iter().zip(&class.colors) {
                if c == 0 { &mut s0 } else { &mut s1 }.push(m.clone());
            }
        } else {
            let target = if next_unsplit % 2 == 0 { &mut s0 } else { &mut s1 };
            target.extend(class.members.iter().cloned());
            next_unsplit += 1;
        }
    }
    s0.sort();
    s1.sort();

    for (part, origins) in [(0, &s0), (1, &s1)] {
        let certified = match sys.periods() {
            Some(_) if !origins.is_empty() => parity_certificate_system(&sys.with_origins(origins.clone())?).is_certified(),
            _ => parity_certificate(origins).is_certified(),
        };
        if !certified {
            return Err(Error::Inconsistent(format!("part S{part} has an odd twin pair")));
        }
    }
    Ok(Decomposition { s0, s1, classes })
}
