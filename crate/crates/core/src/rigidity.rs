//! Rigidity certificates and covered-cube witnesses.
//!
//! A packing whose twin pairs (origins differing by a vector in `{-1,0,1}^d`)
//! all flip an even number of coordinates is rough: every unit cube it covers
//! is one of its own cubes. Conversely, a covered cube `I + u` with `u ∉ S`
//! always exposes an odd twin pair among the cubes meeting it, and the pair can
//! be chosen with a support that is maximal among those cubes.

use std::collections::HashSet;

use serde::Serialize;

use crate::erosion::{erode_cells, FaceSet};
use crate::error::{Error, Result};
use crate::geometry::{overlap_volume, serialize_scalar, BoxSet, HalfOpenBox, Point};
use crate::packing::{CubeSystem, Neighbor, NeighborSet};
use crate::scalar::{self, Scalar};

/// Two origins with `t - t' ∈ {-1,0,1}^d` and an odd number of unit differences.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(bound = "")]
pub struct WitnessPair<S: Scalar> {
    pub t: Point<S>,
    pub t_prime: Point<S>,
    /// Coordinates with `|t_i - t'_i| = 1`.
    pub flipped: Vec<usize>,
}

impl<S: Scalar> WitnessPair<S> {
    /// Checks the pair invariants from scratch.
    pub fn is_valid(&self) -> bool {
        twin_flips(&self.t, &self.t_prime).is_some_and(|f| f == self.flipped && f.len() % 2 == 1)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum CertificateStatus {
    Certified,
    Refuted,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(bound = "")]
pub struct ParityCertificate<S: Scalar> {
    pub status: CertificateStatus,
    pub counterexample: Option<WitnessPair<S>>,
}

impl<S: Scalar> ParityCertificate<S> {
    pub fn is_certified(&self) -> bool {
        self.status == CertificateStatus::Certified
    }
}

/// Coordinates with a unit difference, provided every difference is in `{-1,0,1}`.
pub fn twin_flips<S: Scalar>(t: &Point<S>, other: &Point<S>) -> Option<Vec<usize>> {
    if t.dim() != other.dim() {
        return None;
    }
    let mut flips = Vec::new();
    for (i, (a, b)) in t.0.iter().zip(&other.0).enumerate() {
        let diff = a.clone() - b.clone();
        if !scalar::zero_or_unit(&diff) {
            return None;
        }
        if !diff.is_zero() {
            flips.push(i);
        }
    }
    Some(flips)
}

/// Nonzero vectors of `{-1,0,1}^dim` in lexicographic order.
fn unit_steps<S: Scalar>(dim: usize) -> Vec<Point<S>> {
    let mut steps = vec![Vec::new()];
    for _ in 0..dim {
        steps = steps
            .into_iter()
            .flat_map(|s: Vec<S>| {
                [-1i64, 0, 1].into_iter().map(move |d| {
                    let mut next = s.clone();
                    next.push(S::from_int(d));
                    next
                })
            })
            .collect();
    }
    steps
        .into_iter()
        .map(Point)
        .filter(|p| p.0.iter().any(|c| !c.is_zero()))
        .collect()
}

fn parity_scan<S: Scalar>(
    dim: usize,
    origins: &[Point<S>],
    is_member: impl Fn(&Point<S>) -> bool,
) -> ParityCertificate<S> {
    let steps = unit_steps::<S>(dim);
    let mut sorted: Vec<&Point<S>> = origins.iter().collect();
    sorted.sort();
    for t in sorted {
        for step in &steps {
            let flips = step.0.iter().filter(|c| !c.is_zero()).count();
            if flips % 2 == 1 {
                let other = t.add(step);
                if is_member(&other) {
                    return ParityCertificate {
                        status: CertificateStatus::Refuted,
                        counterexample: Some(WitnessPair {
                            t: t.clone(),
                            flipped: twin_flips(t, &other).expect("unit step"),
                            t_prime: other,
                        }),
                    };
                }
            }
        }
    }
    ParityCertificate {
        status: CertificateStatus::Certified,
        counterexample: None,
    }
}

/// Parity check over a finite list of origins.
pub fn parity_certificate<S: Scalar>(origins: &[Point<S>]) -> ParityCertificate<S> {
    let Some(first) = origins.first() else {
        return ParityCertificate {
            status: CertificateStatus::Certified,
            counterexample: None,
        };
    };
    let set: HashSet<&Point<S>> = origins.iter().collect();
    parity_scan(first.dim(), origins, |p| set.contains(p))
}

/// Parity check over a system; periodic systems are checked on unfolded pairs.
pub fn parity_certificate_system<S: Scalar>(sys: &CubeSystem<S>) -> ParityCertificate<S> {
    let members = sys.member_set();
    parity_scan(sys.dim(), sys.origins(), |p| members.contains(p))
}

/// `Σ_{s ∈ neighbors(u)} vol((I + u) ∩ (I + s))`, which is 1 exactly when `I + u` is covered.
pub fn volume_identity<S: Scalar>(sys: &CubeSystem<S>, u: &Point<S>) -> Result<S> {
    sys.covered_volume(u)
}

/// Whether `I + u ⊆ ⋃(I + S)`. Disjoint half-open cubes cover `I + u`
/// exactly when their overlap volumes with it sum to one.
pub fn is_covered<S: Scalar>(sys: &CubeSystem<S>, u: &Point<S>) -> Result<bool> {
    Ok(volume_identity(sys, u)? == S::one())
}

/// Covered positions `u ∈ window` with `u ∉ S`; empty iff the union is rough
/// inside the window.
///
/// The union is rebuilt from every cube whose origin lies within distance 1
/// of the window, which contains every cube that can meet `I + u`.
pub fn find_covered_outsiders<S: Scalar>(sys: &CubeSystem<S>, window: &HalfOpenBox<S>) -> Result<FaceSet<S>> {
    sys.require_packing()?;
    let padded = window.padded(&S::one());
    let local = sys.unfold(&padded)?;
    let union = BoxSet::from_boxes(sys.dim(), local.iter().map(Point::unit_cube))?;
    let grid = erode_cells(&union, window)?;
    let origins: HashSet<&Point<S>> = local.iter().collect();
    let outsiders = grid
        .covered
        .iter()
        .filter(|cell| grid.vertex(cell).is_none_or(|p| !origins.contains(&p)))
        .cloned()
        .collect();
    Ok(grid.merge(outsiders))
}

fn covered_neighbors<S: Scalar>(sys: &CubeSystem<S>, u: &Point<S>) -> Result<NeighborSet<S>> {
    let nb = sys.neighbors(u)?;
    if nb.contains_center() {
        return Err(Error::AlreadyMember(u.to_string()));
    }
    let vol = scalar::sum(nb.members.iter().map(|m| overlap_volume(u, &m.origin)));
    if vol != S::one() {
        return Err(Error::NotCovered(u.to_string()));
    }
    Ok(nb)
}

/// The neighbor with the largest support, lexicographically smallest among ties.
/// A support of maximum size is maximal under inclusion.
fn maximal_support_member<S: Scalar>(nb: &NeighborSet<S>) -> &Neighbor<S> {
    nb.members
        .iter()
        .min_by(|a, b| {
            b.support
                .len()
                .cmp(&a.support.len())
                .then_with(|| a.origin.cmp(&b.origin))
        })
        .expect("a covered cube has neighbors")
}

/// An odd twin pair among the cubes meeting a covered `I + u`, `u ∉ S`.
///
/// `t` has maximal support among the neighbors and `t'` shares that support.
pub fn twin_witness<S: Scalar>(sys: &CubeSystem<S>, u: &Point<S>) -> Result<WitnessPair<S>> {
    let nb = covered_neighbors(sys, u)?;
    let anchor = maximal_support_member(&nb);
    odd_twin_of(&nb, anchor, u)
}

/// Like [`twin_witness`], but anchored at a caller-chosen neighbor `t`, whose
/// support must be maximal under inclusion among the neighbors of `u`.
pub fn twin_partner<S: Scalar>(sys: &CubeSystem<S>, u: &Point<S>, t: &Point<S>) -> Result<WitnessPair<S>> {
    let nb = covered_neighbors(sys, u)?;
    let anchor = nb
        .members
        .iter()
        .find(|m| &m.origin == t)
        .ok_or_else(|| Error::Usage(format!("{t} does not meet the cube at {u}")))?;
    let dominated = nb.members.iter().any(|m| {
        m.support.len() > anchor.support.len() && anchor.support.iter().all(|i| m.support.contains(i))
    });
    if dominated {
        return Err(Error::Usage(format!("the support of {t} is not maximal around {u}")));
    }
    odd_twin_of(&nb, anchor, u)
}

fn odd_twin_of<S: Scalar>(nb: &NeighborSet<S>, anchor: &Neighbor<S>, u: &Point<S>) -> Result<WitnessPair<S>> {
    nb.members
        .iter()
        .filter(|m| m.support == anchor.support)
        .find_map(|m| {
            let flipped = twin_flips(&anchor.origin, &m.origin)?;
            (flipped.len() % 2 == 1).then(|| WitnessPair {
                t: anchor.origin.clone(),
                t_prime: m.origin.clone(),
                flipped,
            })
        })
        .ok_or_else(|| Error::Inconsistent(format!("no odd twin for {} around {u}", anchor.origin)))
}

/// One cube of the local sign decomposition.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(bound = "")]
pub struct IndexEntry<S: Scalar> {
    pub origin: Point<S>,
    /// `s - u` restricted to the anchor's support.
    pub offset: Point<S>,
    /// Signed count of the sign-cells of `B` inside the cube: `0`, `1` or `-1`.
    pub index: i8,
    /// Every projected coordinate is nonzero.
    pub full_support: bool,
}

/// The signed-cell bookkeeping around a corner of the anchor cube.
///
/// In the frame of `u`, the anchor `t` has support of size `k`, and
/// `v_i = t_i + 1` if `t_i < 0` else `t_i` is a corner of `I + t` inside the
/// open unit cube of those `k` coordinates. The box `B` of half-width `gamma`
/// around `v` splits into `2^k` sign-cells with sign `(-1)^{#upper halves}`.
/// Each cube meeting every shrinking `B` cuts out a union of cells; its index
/// is the signed count. Since `B` is covered, the indices sum to the index of
/// `B`, which is zero.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(bound = "")]
pub struct IndexDiagnostics<S: Scalar> {
    pub anchor: Point<S>,
    /// Coordinates of the anchor's support (the projection).
    pub projection_dims: Vec<usize>,
    /// `v`, in absolute coordinates.
    pub center: Point<S>,
    #[serde(serialize_with = "serialize_scalar")]
    pub halfwidth: S,
    pub entries: Vec<IndexEntry<S>>,
    /// Sum of indices over full-support entries.
    pub index_sum: i64,
}

impl<S: Scalar> IndexDiagnostics<S> {
    pub fn entry(&self, origin: &Point<S>) -> Option<&IndexEntry<S>> {
        self.entries.iter().find(|e| &e.origin == origin)
    }
}

pub fn index_diagnostics<S: Scalar>(sys: &CubeSystem<S>, u: &Point<S>) -> Result<IndexDiagnostics<S>> {
    let nb = covered_neighbors(sys, u)?;
    let anchor = maximal_support_member(&nb);
    let dims = anchor.support.clone();
    let offset = |s: &Point<S>, i: usize| s.0[i].clone() - u.0[i].clone();

    let v: Vec<S> = dims
        .iter()
        .map(|&i| {
            let o = offset(&anchor.origin, i);
            if o < S::zero() {
                o + S::one()
            } else {
                o
            }
        })
        .collect();

    let mut clearance: Option<S> = None;
    let mut consider = |d: S| {
        if d > S::zero() && clearance.as_ref().is_none_or(|c| &d < c) {
            clearance = Some(d);
        }
    };
    for (vi, _) in v.iter().zip(&dims) {
        consider(vi.clone());
        consider(S::one() - vi.clone());
    }
    for m in &nb.members {
        for (vi, &i) in v.iter().zip(&dims) {
            let o = offset(&m.origin, i);
            consider((vi.clone() - o.clone()).abs());
            consider((vi.clone() - o - S::one()).abs());
        }
    }
    let halfwidth = clearance.expect("v lies strictly inside the unit cube") * S::half();

    let mut entries = Vec::new();
    for m in &nb.members {
        let off_dims = (0..u.dim()).filter(|i| !dims.contains(i));
        let in_slice = off_dims
            .clone()
            .all(|j| offset(&m.origin, j) <= S::zero() && offset(&m.origin, j) > -S::one());
        let at_corner = dims.iter().zip(&v).all(|(&i, vi)| {
            let o = offset(&m.origin, i);
            &o <= vi && vi <= &(o + S::one())
        });
        if !(in_slice && at_corner) {
            continue;
        }
        let mut index: i8 = 1;
        for (&i, vi) in dims.iter().zip(&v) {
            let o = offset(&m.origin, i);
            if &o == vi {
                index = -index;
            } else if &(o + S::one()) != vi {
                index = 0;
                break;
            }
        }
        let projected = Point(dims.iter().map(|&i| offset(&m.origin, i)).collect());
        let full_support = projected.0.iter().all(|c| !c.is_zero());
        entries.push(IndexEntry {
            origin: m.origin.clone(),
            offset: projected,
            index,
            full_support,
        });
    }
    let index_sum = entries
        .iter()
        .filter(|e| e.full_support)
        .map(|e| i64::from(e.index))
        .sum();

    let mut center = u.clone();
    for (&i, vi) in dims.iter().zip(&v) {
        center.0[i] = u.0[i].clone() + vi.clone();
    }
    Ok(IndexDiagnostics {
        anchor: anchor.origin.clone(),
        projection_dims: dims,
        center,
        halfwidth,
        entries,
        index_sum,
    })
}

/// Per-coordinate positive and negative neighbor offsets.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(bound = "")]
pub struct PairingReport<S: Scalar> {
    /// `A_i`: positive offsets `s_i - u_i`, sorted.
    pub positive: Vec<Point<S>>,
    /// `B_i`: negative offsets, sorted.
    pub negative: Vec<Point<S>>,
    /// `(i, b)` with `b ∈ B_i` but `b + 1 ∉ A_i`.
    pub missing: Vec<(usize, Point<S>)>,
}

/// Checks that every negative offset `b` is matched by the positive offset `b + 1`.
pub fn pairing_check<S: Scalar>(sys: &CubeSystem<S>, u: &Point<S>) -> Result<PairingReport<S>> {
    if !is_covered(sys, u)? {
        return Err(Error::NotCovered(u.to_string()));
    }
    let nb = sys.neighbors(u)?;
    let offsets: Vec<Point<S>> = nb.offsets().collect();
    let mut positive = Vec::with_capacity(u.dim());
    let mut negative = Vec::with_capacity(u.dim());
    let mut missing = Vec::new();
    for i in 0..u.dim() {
        let mut a: Vec<S> = offsets.iter().map(|o| o.0[i].clone()).filter(|x| x > &S::zero()).collect();
        let mut b: Vec<S> = offsets.iter().map(|o| o.0[i].clone()).filter(|x| x < &S::zero()).collect();
        a.sort();
        a.dedup();
        b.sort();
        b.dedup();
        for x in &b {
            if a.binary_search(&(x.clone() + S::one())).is_err() {
                missing.push((i, Point(vec![x.clone()])));
            }
        }
        positive.push(Point(a));
        negative.push(Point(b));
    }
    Ok(PairingReport {
        positive,
        negative,
        missing,
    })
}
