//! Brute-force coverage oracle, independent of the neighbor/volume route.

use crate::error::Result;
use crate::geometry::{HalfOpenBox, Point};
use crate::packing::{cartesian, CubeSystem};
use crate::scalar::Scalar;

/// Whether `I + u` lies in the union of the cubes.
///
/// `I + u` is cut along every cube boundary that crosses it; each cell is a
/// half-open box lying in a single cube or outside all of them, and a
/// half-open cell is inside a cube iff its lower corner is. No volumes.
pub fn brute_force_covered<S: Scalar>(u: &Point<S>, sys: &CubeSystem<S>) -> Result<bool> {
    u.check_dim(sys.dim())?;
    let one = S::one();
    let reach = HalfOpenBox::new(
        u.0.iter().map(|x| x.clone() - one.clone()).collect(),
        u.0.iter().map(|x| x.clone() + one.clone()).collect(),
    )?;
    let cubes: Vec<HalfOpenBox<S>> = sys.unfold(&reach)?.iter().map(Point::unit_cube).collect();

    let mut cuts: Vec<Vec<S>> = Vec::with_capacity(sys.dim());
    for i in 0..sys.dim() {
        let lo = u.0[i].clone();
        let hi = lo.clone() + one.clone();
        let mut c = vec![lo.clone()];
        for b in &cubes {
            for x in [&b.lower()[i], &b.upper()[i]] {
                if x > &lo && x < &hi {
                    c.push(x.clone());
                }
            }
        }
        c.sort();
        c.dedup();
        cuts.push(c);
    }

    let mut covered = true;
    cartesian(&cuts, &mut |corner| {
        if covered {
            let p = Point(corner.to_vec());
            covered = cubes.iter().any(|b| b.contains(&p));
        }
    });
    Ok(covered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn pt(coords: &[(i64, i64)]) -> Point<Q> {
        Point(coords.iter().map(|&(n, d)| Q::ratio(n, d)).collect())
    }

    #[test]
    fn member_is_covered() {
        let sys = CubeSystem::finite(2, vec![pt(&[(0, 1), (0, 1)]), pt(&[(1, 1), (0, 1)])]).unwrap();
        assert!(brute_force_covered(&pt(&[(1, 1), (0, 1)]), &sys).unwrap());
    }

    #[test]
    fn four_quarters() {
        let sys = CubeSystem::finite(
            2,
            vec![pt(&[(-1, 2), (-1, 2)]), pt(&[(1, 2), (-1, 2)]), pt(&[(-1, 2), (1, 2)]), pt(&[(1, 2), (1, 2)])],
        )
        .unwrap();
        assert!(brute_force_covered(&pt(&[(0, 1), (0, 1)]), &sys).unwrap());
        assert!(brute_force_covered(&pt(&[(0, 1), (1, 4)]), &sys).unwrap());
        assert!(!brute_force_covered(&pt(&[(0, 1), (3, 4)]), &sys).unwrap());
    }

    #[test]
    fn domino_top_strip() {
        let sys = CubeSystem::finite(2, vec![pt(&[(0, 1), (0, 1)]), pt(&[(1, 1), (0, 1)])]).unwrap();
        assert!(!brute_force_covered(&pt(&[(1, 2), (1, 4)]), &sys).unwrap());
        assert!(brute_force_covered(&pt(&[(1, 2), (0, 1)]), &sys).unwrap());
    }

    #[test]
    fn torus_wraps() {
        let sys = CubeSystem::periodic(1, vec![pt(&[(0, 1)]), pt(&[(1, 1)])], vec![2]).unwrap();
        assert!(brute_force_covered(&pt(&[(-7, 3)]), &sys).unwrap());
        let half = CubeSystem::periodic(1, vec![pt(&[(0, 1)])], vec![2]).unwrap();
        assert!(!brute_force_covered(&pt(&[(1, 2)]), &half).unwrap());
        assert!(brute_force_covered(&pt(&[(4, 1)]), &half).unwrap());
    }
}
