//! Statements about cube tilings, checked on torus-periodic instances.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{HalfOpenBox, Point};
use crate::packing::CubeSystem;
use crate::scalar::Scalar;

/// A vector in `{-1, 1}^d`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    pub fn all_positive(dim: usize) -> Self {
        SignVector(vec![1; dim])
    }

    /// Parse `"+,-,+"` (also accepts `1`/`-1`).
    pub fn parse(text: &str) -> Result<Self> {
        text.split(',')
            .enumerate()
            .map(|(i, part)| match part.trim() {
                "+" | "1" | "+1" => Ok(1),
                "-" | "-1" => Ok(-1),
                other => Err(Error::Parse {
                    location: format!("sign {i}"),
                    message: format!("expected + or -, found {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignVector)
    }

    /// All `2^dim` sign vectors, in binary order with `+` first.
    pub fn all(dim: usize) -> impl Iterator<Item = SignVector> {
        (0..1usize << dim).map(move |mask| {
            SignVector((0..dim).map(|i| if mask >> (dim - 1 - i) & 1 == 1 { -1 } else { 1 }).collect())
        })
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `t + Σ_{i ∈ coords} ε_i e_i`.
    pub fn step<S: Scalar>(&self, t: &Point<S>, coords: &[usize]) -> Point<S> {
        let mut out = t.clone();
        for &i in coords {
            out.0[i] = out.0[i].clone() + S::from_int(i64::from(self.0[i]));
        }
        out
    }

    /// `t + ε/2`.
    pub fn half_step<S: Scalar>(&self, t: &Point<S>) -> Point<S> {
        Point(
            t.0.iter()
                .zip(&self.0)
                .map(|(x, &e)| x.clone() + S::ratio(i64::from(e), 2))
                .collect(),
        )
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.0.iter().map(|&e| if e > 0 { "+" } else { "-" }).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// An odd set `J` with `t + Σ_{i ∈ J} ε_i e_i ∈ S`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(bound = "")]
pub struct OrthantWitness<S: Scalar> {
    pub base: Point<S>,
    pub sign: SignVector,
    #[serde(rename = "J")]
    pub coords: Vec<usize>,
    pub target: Point<S>,
}

impl<S: Scalar> OrthantWitness<S> {
    /// Re-checks oddness, the target formula and membership.
    pub fn verify(&self, sys: &CubeSystem<S>) -> bool {
        self.coords.len() % 2 == 1
            && self.coords.windows(2).all(|w| w[0] < w[1])
            && self.sign.step(&self.base, &self.coords) == self.target
            && sys.contains(&self.target)
    }
}

/// Lexicographic `k`-subsets of `0..n`.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for i in start..n {
            if n - i < k - acc.len() {
                break;
            }
            acc.push(i);
            go(i + 1, n, k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn require_torus_tiling<S: Scalar>(sys: &CubeSystem<S>) -> Result<()> {
    if !sys.is_periodic() {
        return Err(Error::NotTiling {
            deficit: "unbounded, the instance is finite".into(),
        });
    }
    sys.require_tiling()
}

/// For a member `t` of a torus tiling and a sign vector `ε`, the first odd
/// `J` (by size, then lexicographically) with `t + Σ_{i ∈ J} ε_i e_i ∈ S`.
pub fn orthant_witness<S: Scalar>(sys: &CubeSystem<S>, t: &Point<S>, sign: &SignVector) -> Result<OrthantWitness<S>> {
    t.check_dim(sys.dim())?;
    if sign.dim() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            found: sign.dim(),
        });
    }
    require_torus_tiling(sys)?;
    let members = sys.member_set();
    if !members.contains(t) {
        return Err(Error::NotMember(t.to_string()));
    }
    for size in (1..=sys.dim()).step_by(2) {
        for coords in combinations(sys.dim(), size) {
            let target = sign.step(t, &coords);
            if members.contains(&target) {
                return Ok(OrthantWitness {
                    base: t.clone(),
                    sign: sign.clone(),
                    coords,
                    target,
                });
            }
        }
    }
    Err(Error::Inconsistent(format!("no orthant witness for {t} in direction {sign}")))
}

/// Number of unfolded origins in `window` that differ from `t` by an integer vector.
pub fn coset_census<S: Scalar>(sys: &CubeSystem<S>, t: &Point<S>, window: &HalfOpenBox<S>) -> Result<usize> {
    t.check_dim(sys.dim())?;
    Ok(sys
        .unfold(window)?
        .iter()
        .filter(|s| s.sub(t).is_integral())
        .count())
}

/// `window` scaled about its lower corner by `1, 2, ..., steps`.
pub fn nested_windows<S: Scalar>(window: &HalfOpenBox<S>, steps: usize) -> Vec<HalfOpenBox<S>> {
    (1..=steps as i64)
        .map(|j| {
            let upper = window
                .lower()
                .iter()
                .zip(window.upper())
                .map(|(l, u)| l.clone() + (u.clone() - l.clone()) * S::from_int(j))
                .collect();
            HalfOpenBox::new(window.lower().to_vec(), upper).expect("scaling keeps the box nonempty")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigidity::twin_partner;
    use num_rational::BigRational;

    type Q = BigRational;

    fn ints(c: &[i64]) -> Point<Q> {
        Point::from_ints(c)
    }

    fn pt(coords: &[(i64, i64)]) -> Point<Q> {
        Point(coords.iter().map(|&(n, d)| Q::ratio(n, d)).collect())
    }

    fn lattice() -> CubeSystem<Q> {
        CubeSystem::periodic(2, vec![ints(&[0, 0]), ints(&[1, 0]), ints(&[0, 1]), ints(&[1, 1])], vec![2, 2]).unwrap()
    }

    fn columns() -> CubeSystem<Q> {
        CubeSystem::periodic(
            2,
            vec![ints(&[0, 0]), ints(&[0, 1]), pt(&[(1, 1), (1, 2)]), pt(&[(1, 1), (3, 2)])],
            vec![2, 2],
        )
        .unwrap()
    }

    fn square(lo: i64, hi: i64) -> HalfOpenBox<Q> {
        HalfOpenBox::new(vec![Q::from_int(lo); 2], vec![Q::from_int(hi); 2]).unwrap()
    }

    #[test]
    fn sign_parsing() {
        assert_eq!(SignVector::parse("+,-").unwrap(), SignVector(vec![1, -1]));
        assert_eq!(SignVector::parse("1,-1").unwrap().to_string(), "+,-");
        assert!(SignVector::parse("+,0").is_err());
        assert_eq!(SignVector::all(3).count(), 8);
    }

    #[test]
    fn combinations_in_order() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn orthant_examples() {
        let w = orthant_witness(&lattice(), &ints(&[0, 0]), &SignVector(vec![1, 1])).unwrap();
        assert_eq!(w.coords, vec![0]);
        assert_eq!(w.target, ints(&[1, 0]));
        for t in lattice().origins() {
            for sign in SignVector::all(2) {
                assert_eq!(orthant_witness(&lattice(), t, &sign).unwrap().coords.len(), 1);
            }
        }
        let w = orthant_witness(&columns(), &ints(&[0, 0]), &SignVector(vec![1, 1])).unwrap();
        assert_eq!(w.coords, vec![1]);
        assert_eq!(w.target, ints(&[0, 1]));
        assert!(w.verify(&columns()));
    }

    #[test]
    fn orthant_errors() {
        let partial = CubeSystem::periodic(2, vec![ints(&[0, 0])], vec![2, 2]).unwrap();
        assert!(matches!(
            orthant_witness(&partial, &ints(&[0, 0]), &SignVector(vec![1, 1])),
            Err(Error::NotTiling { .. })
        ));
        assert!(matches!(
            orthant_witness(&columns(), &ints(&[1, 0]), &SignVector(vec![1, 1])),
            Err(Error::NotMember(_))
        ));
    }

    #[test]
    fn twin_route_agrees_with_search() {
        let sys = columns();
        for t in sys.origins() {
            for sign in SignVector::all(2) {
                let u = sign.half_step(t);
                let pair = twin_partner(&sys, &u, t).unwrap();
                assert_eq!(pair.t_prime, sign.step(t, &pair.flipped));
            }
        }
    }

    #[test]
    fn census_examples() {
        assert_eq!(coset_census(&lattice(), &ints(&[0, 0]), &square(0, 4)).unwrap(), 16);
        assert_eq!(coset_census(&columns(), &ints(&[0, 0]), &square(0, 2)).unwrap(), 2);
        let counts: Vec<usize> = nested_windows(&square(0, 2), 3)
            .iter()
            .map(|w| coset_census(&columns(), &pt(&[(1, 1), (1, 2)]), w).unwrap())
            .collect();
        assert_eq!(counts, vec![2, 8, 18]);
    }
}
