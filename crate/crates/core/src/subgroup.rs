//! Basis vectors in the integer part of a cube tiling.
//!
//! For a torus tiling containing `0`, let `G = S ∩ Z^d` (read modulo the
//! periods). If `G` is a subgroup, contains every `k_i e_i`, and the `k_i` are
//! pairwise coprime against a set `L` of at least `d - 2` coordinates, then
//! some `e_m` lies in `G`. The certificate records how: the orthant witness at
//! `0` gives `s = Σ_{i ∈ J} e_i ∈ G` with `|J|` odd; for `m ∈ J ∩ L`,
//! `n = Π_{i ∈ J∖{m}} k_i` is coprime to `k_m`, and a Bezout pair
//! `x n + y k_m = 1` writes `e_m` as an integer combination of `s` and the
//! `k_i e_i`.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::packing::CubeSystem;
use crate::scalar::Scalar;
use crate::tiling::{orthant_witness, SignVector};

/// `(g, x, y)` with `g = gcd(a, b) >= 0` and `a x + b y = g`.
pub fn extended_gcd<T: Integer + Signed + Clone>(a: &T, b: &T) -> (T, T, T) {
    let (mut old_r, mut r) = (a.abs(), b.abs());
    let (mut old_x, mut x) = (T::one(), T::zero());
    let (mut old_y, mut y) = (T::zero(), T::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = old_r - q.clone() * r.clone();
        old_r = std::mem::replace(&mut r, next_r);
        let next_x = old_x - q.clone() * x.clone();
        old_x = std::mem::replace(&mut x, next_x);
        let next_y = old_y - q * y.clone();
        old_y = std::mem::replace(&mut y, next_y);
    }
    if a.is_negative() {
        old_x = -old_x;
    }
    if b.is_negative() {
        old_y = -old_y;
    }
    (old_r, old_x, old_y)
}

/// The first failed hypothesis.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "violation")]
pub enum SubgroupViolation {
    /// `G` does not contain `0`.
    MissingIdentity,
    NotClosedUnderAddition { a: Vec<i64>, b: Vec<i64> },
    NotClosedUnderNegation { a: Vec<i64> },
    /// `|L| < d - 2`.
    CoordinateSetTooSmall { size: usize, required: usize },
    /// `k_i e_i ∉ G`.
    MissingMultiple { axis: usize, k: i64 },
    /// `gcd(k_i, k_l) ≠ 1` for some `l ∈ L`.
    NotCoprime { i: usize, l: usize, gcd: i64 },
}

impl fmt::Display for SubgroupViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupViolation::MissingIdentity => write!(f, "G does not contain 0"),
            SubgroupViolation::NotClosedUnderAddition { a, b } => {
                write!(f, "G is not closed under addition: {a:?} + {b:?}")
            }
            SubgroupViolation::NotClosedUnderNegation { a } => write!(f, "G is not closed under negation: -{a:?}"),
            SubgroupViolation::CoordinateSetTooSmall { size, required } => {
                write!(f, "L has {size} coordinates, at least {required} required")
            }
            SubgroupViolation::MissingMultiple { axis, k } => {
                write!(f, "{k} e_{axis} is not in G")
            }
            SubgroupViolation::NotCoprime { i, l, gcd } => {
                write!(f, "k_{i} and k_{l} are not coprime: gcd = {gcd}")
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "status")]
pub enum SubgroupStatus {
    Valid,
    Violation(SubgroupViolation),
}

/// `G = S ∩ Z^d` modulo the periods.
struct IntegerPart {
    periods: Vec<i64>,
    elements: Vec<Vec<i64>>,
    set: HashSet<Vec<i64>>,
}

impl IntegerPart {
    fn new<S: Scalar>(sys: &CubeSystem<S>) -> Result<Self> {
        let periods = sys.periods().ok_or(Error::NotPeriodic)?.to_vec();
        let mut elements: Vec<Vec<i64>> = sys
            .origins()
            .iter()
            .filter_map(|o| o.0.iter().map(Scalar::to_i64_exact).collect::<Option<Vec<_>>>())
            .collect();
        elements.sort();
        let set = elements.iter().cloned().collect();
        Ok(IntegerPart {
            periods,
            elements,
            set,
        })
    }

    fn contains(&self, v: &[i64]) -> bool {
        let reduced: Vec<i64> = v.iter().zip(&self.periods).map(|(x, p)| x.rem_euclid(*p)).collect();
        self.set.contains(&reduced)
    }

    fn contains_big(&self, v: &[BigInt]) -> bool {
        let reduced: Vec<i64> = v
            .iter()
            .zip(&self.periods)
            .map(|(x, &p)| {
                let r = x.mod_floor(&BigInt::from(p));
                i64::try_from(r).expect("residue fits")
            })
            .collect();
        self.set.contains(&reduced)
    }

    fn basis_multiple(&self, axis: usize, k: i64) -> Vec<i64> {
        let mut v = vec![0; self.periods.len()];
        v[axis] = k;
        v
    }
}

fn check_arguments(dim: usize, k: &[i64], coords: &[usize]) -> Result<()> {
    if k.len() != dim {
        return Err(Error::Usage(format!("k has {} entries, expected {dim}", k.len())));
    }
    let mut seen = HashSet::new();
    for &l in coords {
        if l >= dim {
            return Err(Error::Usage(format!("coordinate {l} in L is out of range for dimension {dim}")));
        }
        if !seen.insert(l) {
            return Err(Error::Usage(format!("coordinate {l} repeated in L")));
        }
    }
    Ok(())
}

/// Checks the hypotheses: `G` a subgroup of the torus group, `|L| >= d - 2`,
/// `k_i e_i ∈ G` for all `i`, and `gcd(k_i, k_l) = 1` for `i ≠ l`, `l ∈ L`.
pub fn subgroup_check<S: Scalar>(sys: &CubeSystem<S>, k: &[i64], coords: &[usize]) -> Result<SubgroupStatus> {
    let dim = sys.dim();
    check_arguments(dim, k, coords)?;
    let group = IntegerPart::new(sys)?;
    sys.require_packing()?;
    let violation = |v| Ok(SubgroupStatus::Violation(v));

    if !group.contains(&vec![0; dim]) {
        return violation(SubgroupViolation::MissingIdentity);
    }
    for a in &group.elements {
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        if !group.contains(&neg) {
            return violation(SubgroupViolation::NotClosedUnderNegation { a: a.clone() });
        }
        for b in &group.elements {
            let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            if !group.contains(&sum) {
                return violation(SubgroupViolation::NotClosedUnderAddition {
                    a: a.clone(),
                    b: b.clone(),
                });
            }
        }
    }
    let required = dim.saturating_sub(2);
    if coords.len() < required {
        return violation(SubgroupViolation::CoordinateSetTooSmall {
            size: coords.len(),
            required,
        });
    }
    for (axis, &ki) in k.iter().enumerate() {
        if !group.contains(&group.basis_multiple(axis, ki)) {
            return violation(SubgroupViolation::MissingMultiple { axis, k: ki });
        }
    }
    for i in 0..dim {
        for &l in coords {
            if i != l {
                let g = k[i].gcd(&k[l]);
                if g != 1 {
                    return violation(SubgroupViolation::NotCoprime { i, l, gcd: g });
                }
            }
        }
    }
    Ok(SubgroupStatus::Valid)
}

fn serialize_big<Z: serde::Serializer>(v: &BigInt, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
    s.serialize_str(&v.to_string())
}

/// Evidence that `e_m ∈ G`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct BasisCertificate {
    /// Odd coordinate set with `Σ_{i ∈ J} e_i ∈ G`.
    #[serde(rename = "J")]
    pub coords: Vec<usize>,
    pub m: usize,
    #[serde(serialize_with = "serialize_big")]
    pub n: BigInt,
    #[serde(serialize_with = "serialize_big")]
    pub k_m: BigInt,
    #[serde(serialize_with = "serialize_big")]
    pub x: BigInt,
    #[serde(serialize_with = "serialize_big")]
    pub y: BigInt,
    /// Membership is read modulo the torus periods.
    pub modulo_periods: bool,
    /// `e_m` was looked up in `G` directly.
    pub membership_checked: bool,
}

impl BasisCertificate {
    pub fn bezout_holds(&self) -> bool {
        self.x.clone() * self.n.clone() + self.y.clone() * self.k_m.clone() == BigInt::one()
    }

    /// Expands `x (n e_m) + y (k_m e_m)` with
    /// `n e_m = n s - Σ_{i ∈ J∖{m}} (n / k_i)(k_i e_i)` and returns the vector.
    pub fn combination(&self, k: &[i64]) -> Vec<BigInt> {
        let dim = k.len();
        let mut v = vec![BigInt::zero(); dim];
        let xn = self.x.clone() * self.n.clone();
        for &i in &self.coords {
            v[i] += xn.clone();
        }
        for &i in self.coords.iter().filter(|&&i| i != self.m) {
            let ki = BigInt::from(k[i]);
            if !ki.is_zero() {
                let coef = self.n.clone() / ki.clone();
                v[i] -= self.x.clone() * coef * ki;
            }
        }
        v[self.m] += self.y.clone() * self.k_m.clone();
        v
    }

    /// The expanded combination is exactly `e_m`.
    pub fn combination_is_basis_vector(&self, k: &[i64]) -> bool {
        self.combination(k)
            .iter()
            .enumerate()
            .all(|(i, c)| if i == self.m { c.is_one() } else { c.is_zero() })
    }
}

/// The arithmetic part of the certificate for a given odd `J`.
pub fn bezout_certificate(coords: &[usize], k: &[i64], l: &[usize]) -> Result<BasisCertificate> {
    if coords.len() % 2 == 0 {
        return Err(Error::Usage(format!("J = {coords:?} has even size")));
    }
    if let Some(&bad) = coords.iter().find(|&&i| i >= k.len()) {
        return Err(Error::Usage(format!("coordinate {bad} in J is out of range")));
    }
    let mut coords = coords.to_vec();
    coords.sort_unstable();
    coords.dedup();

    if coords.len() == 1 {
        let m = coords[0];
        return Ok(BasisCertificate {
            m,
            n: BigInt::one(),
            k_m: BigInt::from(k[m]),
            x: BigInt::one(),
            y: BigInt::zero(),
            coords,
            modulo_periods: false,
            membership_checked: false,
        });
    }
    let m = *coords
        .iter()
        .find(|i| l.contains(i))
        .ok_or_else(|| Error::HypothesisViolated(format!("J = {coords:?} does not meet L = {l:?}")))?;
    let n: BigInt = coords
        .iter()
        .filter(|&&i| i != m)
        .map(|&i| BigInt::from(k[i]))
        .product();
    let k_m = BigInt::from(k[m]);
    let (g, x, y) = extended_gcd(&n, &k_m);
    if !g.is_one() {
        return Err(Error::HypothesisViolated(format!("gcd(n, k_m) = gcd({n}, {k_m}) = {g}")));
    }
    Ok(BasisCertificate {
        coords,
        m,
        n,
        k_m,
        x,
        y,
        modulo_periods: false,
        membership_checked: false,
    })
}

/// Certificate that some `e_m` lies in `G`, for a torus tiling containing `0`.
pub fn basis_vector_certificate<S: Scalar>(sys: &CubeSystem<S>, k: &[i64], l: &[usize]) -> Result<BasisCertificate> {
    match subgroup_check(sys, k, l)? {
        SubgroupStatus::Valid => {}
        SubgroupStatus::Violation(v) => return Err(Error::HypothesisViolated(v.to_string())),
    }
    let dim = sys.dim();
    let witness = orthant_witness(sys, &Point::origin(dim), &SignVector::all_positive(dim))?;
    let mut cert = bezout_certificate(&witness.coords, k, l)?;
    cert.modulo_periods = true;

    if !cert.bezout_holds() || !cert.combination_is_basis_vector(k) {
        return Err(Error::Inconsistent("Bezout combination does not reduce to a basis vector".into()));
    }
    let group = IntegerPart::new(sys)?;
    let s: Vec<BigInt> = (0..dim)
        .map(|i| BigInt::from(i64::from(cert.coords.contains(&i))))
        .collect();
    let generators_ok = group.contains_big(&s)
        && cert
            .coords
            .iter()
            .all(|&i| group.contains(&group.basis_multiple(i, k[i])));
    let basis: Vec<i64> = (0..dim).map(|i| i64::from(i == cert.m)).collect();
    if !generators_ok || !group.contains(&basis) {
        return Err(Error::Inconsistent(format!("e_{} is not in G", cert.m)));
    }
    cert.membership_checked = true;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn ints(c: &[i64]) -> Point<Q> {
        Point::from_ints(c)
    }

    fn lattice() -> CubeSystem<Q> {
        CubeSystem::periodic(2, vec![ints(&[0, 0]), ints(&[1, 0]), ints(&[0, 1]), ints(&[1, 1])], vec![2, 2]).unwrap()
    }

    fn even_sum() -> CubeSystem<Q> {
        CubeSystem::periodic(2, vec![ints(&[0, 0]), ints(&[1, 1])], vec![2, 2]).unwrap()
    }

    #[test]
    fn extended_gcd_examples() {
        assert_eq!(extended_gcd(&15i64, &2), (1, 1, -7));
        assert_eq!(extended_gcd(&6i64, &5), (1, 1, -1));
        assert_eq!(extended_gcd(&-6i64, &5), (1, -1, -1));
        assert_eq!(extended_gcd(&12i64, &18).0, 6);
        assert_eq!(extended_gcd(&0i64, &7), (7, 0, 1));
    }

    #[test]
    fn subgroup_examples() {
        assert_eq!(subgroup_check(&lattice(), &[1, 1], &[0, 1]).unwrap(), SubgroupStatus::Valid);
        assert_eq!(
            subgroup_check(&lattice(), &[2, 2], &[0, 1]).unwrap(),
            SubgroupStatus::Violation(SubgroupViolation::NotCoprime { i: 0, l: 1, gcd: 2 })
        );
        assert_eq!(
            subgroup_check(&even_sum(), &[2, 2], &[0, 1]).unwrap(),
            SubgroupStatus::Violation(SubgroupViolation::NotCoprime { i: 0, l: 1, gcd: 2 })
        );
        assert_eq!(
            subgroup_check(&even_sum(), &[1, 2], &[0, 1]).unwrap(),
            SubgroupStatus::Violation(SubgroupViolation::MissingMultiple { axis: 0, k: 1 })
        );
    }

    #[test]
    fn subgroup_closure_failures() {
        let shifted = CubeSystem::periodic(1, vec![ints(&[1]), Point(vec![Q::ratio(1, 2) + Q::from_int(2)])], vec![4]).unwrap();
        assert_eq!(
            subgroup_check(&shifted, &[1], &[]).unwrap(),
            SubgroupStatus::Violation(SubgroupViolation::MissingIdentity)
        );
        let sys = CubeSystem::periodic(1, vec![ints(&[0]), ints(&[1])], vec![4]).unwrap();
        assert_eq!(
            subgroup_check(&sys, &[1], &[]).unwrap(),
            SubgroupStatus::Violation(SubgroupViolation::NotClosedUnderNegation { a: vec![1] })
        );
        assert!(matches!(subgroup_check(&sys, &[1, 1], &[]), Err(Error::Usage(_))));
    }

    #[test]
    fn certificate_for_the_integer_tiling() {
        let cert = basis_vector_certificate(&lattice(), &[1, 1], &[0, 1]).unwrap();
        assert_eq!(cert.coords, vec![0]);
        assert_eq!(cert.m, 0);
        assert!(cert.bezout_holds());
        assert!(cert.membership_checked);
        assert!(matches!(
            basis_vector_certificate(&lattice(), &[2, 2], &[0, 1]),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn synthetic_bezout_cases() {
        let cert = bezout_certificate(&[0, 1, 2], &[2, 3, 5], &[0, 1, 2]).unwrap();
        assert_eq!((cert.m, cert.n.clone()), (0, BigInt::from(15)));
        assert_eq!((cert.x.clone(), cert.y.clone()), (BigInt::from(1), BigInt::from(-7)));
        assert!(cert.combination_is_basis_vector(&[2, 3, 5]));

        let cert = bezout_certificate(&[0, 1, 2], &[2, 3, 5], &[2]).unwrap();
        assert_eq!((cert.m, cert.n.clone()), (2, BigInt::from(6)));
        assert_eq!((cert.x.clone(), cert.y.clone()), (BigInt::from(1), BigInt::from(-1)));
        assert!(cert.combination_is_basis_vector(&[2, 3, 5]));

        assert!(matches!(
            bezout_certificate(&[0, 1, 2], &[2, 4, 6], &[0]),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(matches!(bezout_certificate(&[0, 1], &[1, 1], &[0]), Err(Error::Usage(_))));
    }
}
