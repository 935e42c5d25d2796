//! Double-description representation of polyhedral cones.
//!
//! A cone `{x : a_i . x >= 0}` is kept as a lineality basis plus a set of
//! extreme rays, both over primitive integer vectors, and is refined one
//! halfspace at a time. Batch sign queries against every concept in the cone
//! then cost one pass over the rays instead of one feasibility call each.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Divides out the gcd of the entries; the zero vector is returned unchanged.
fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in &v {
        g = g.gcd(x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in &mut v {
            *x /= &g;
        }
    }
    v
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Grow-only bitset tracking which stored constraints a ray satisfies with
/// equality.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new() -> Self {
        BitSet(Vec::new())
    }

    fn set(&mut self, i: usize) {
        let word = i / 64;
        if word >= self.0.len() {
            self.0.resize(word + 1, 0);
        }
        self.0[word] |= 1u64 << (i % 64);
    }

    fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a & b)
                .collect(),
        )
    }

    fn contains_all(&self, other: &BitSet) -> bool {
        other
            .0
            .iter()
            .enumerate()
            .all(|(w, bits)| bits & !self.0.get(w).copied().unwrap_or(0) == 0)
    }
}

#[derive(Debug, Clone)]
struct Ray {
    v: Vec<BigInt>,
    active: BitSet,
}

/// A polyhedral cone under incremental halfspace refinement.
#[derive(Debug, Clone)]
pub struct Cone {
    dim: usize,
    /// The cutting halfspaces kept in the description.
    constraints: Vec<Vec<BigInt>>,
    lineality: Vec<Vec<BigInt>>,
    rays: Vec<Ray>,
}

impl Cone {
    /// The full ambient space, as a cone with a complete lineality basis.
    pub fn full_space(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        let lineality = (0..dim)
            .map(|i| {
                let mut e = vec![BigInt::zero(); dim];
                e[i] = BigInt::from(1);
                e
            })
            .collect();
        Ok(Cone {
            dim,
            constraints: Vec::new(),
            lineality,
            rays: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lineality(&self) -> &[Vec<BigInt>] {
        &self.lineality
    }

    pub fn rays(&self) -> impl Iterator<Item = &[BigInt]> {
        self.rays.iter().map(|r| r.v.as_slice())
    }

    /// True iff the cone is exactly the origin.
    pub fn is_trivial(&self) -> bool {
        self.lineality.is_empty() && self.rays.is_empty()
    }

    /// Intersects the cone with `{x : a . x >= 0}`.
    pub fn add_halfspace(&mut self, a: &[BigInt]) -> Result<()> {
        if a.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: a.len(),
            });
        }
        let a = primitive(a.to_vec());
        if a.iter().all(Zero::is_zero) {
            return Ok(());
        }

        if let Some(pos) = self.lineality.iter().position(|l| !dot(&a, l).is_zero()) {
            self.cut_lineality(a, pos);
            return Ok(());
        }
        self.split_rays(a);
        Ok(())
    }

    /// The constraint cuts through the lineality space: pivot the hit basis
    /// vector out of the lineality and into the ray set, projecting
    /// everything else onto the constraint's hyperplane.
    fn cut_lineality(&mut self, a: Vec<BigInt>, pos: usize) {
        let mut pivot = self.lineality.swap_remove(pos);
        let mut pa = dot(&a, &pivot);
        if pa.is_negative() {
            for x in &mut pivot {
                *x = -&*x;
            }
            pa = -pa;
        }
        for l in &mut self.lineality {
            let la = dot(&a, l);
            if !la.is_zero() {
                let combined: Vec<BigInt> = l
                    .iter()
                    .zip(&pivot)
                    .map(|(x, p)| x * &pa - p * &la)
                    .collect();
                *l = primitive(combined);
            }
        }
        let mut new_rays: Vec<Vec<BigInt>> = Vec::with_capacity(self.rays.len() + 1);
        for r in &self.rays {
            let ra = dot(&a, &r.v);
            let projected: Vec<BigInt> = r
                .v
                .iter()
                .zip(&pivot)
                .map(|(x, p)| x * &pa - p * &ra)
                .collect();
            let projected = primitive(projected);
            if !projected.iter().all(Zero::is_zero) && !new_rays.contains(&projected) {
                new_rays.push(projected);
            }
        }
        if !new_rays.contains(&pivot) {
            new_rays.push(pivot);
        }
        self.constraints.push(a);
        self.rays = new_rays
            .into_iter()
            .map(|v| {
                let active = self.activity(&v);
                Ray { v, active }
            })
            .collect();
    }

    /// Standard double-description step for a constraint whose hyperplane
    /// misses the lineality space.
    fn split_rays(&mut self, a: Vec<BigInt>) {
        let values: Vec<BigInt> = self.rays.iter().map(|r| dot(&a, &r.v)).collect();
        if values.iter().all(|v| !v.is_negative()) {
            // Every ray already satisfies the halfspace: the constraint is
            // redundant for the current cone and is not stored.
            return;
        }

        let idx = self.constraints.len();
        self.constraints.push(a);

        // Adjacent (positive, negative) pairs spawn one ray each on the
        // hyperplane. Pair adjacency is combinatorial: no third ray's active
        // set may contain the pair's common active set.
        let mut spawned: Vec<Vec<BigInt>> = Vec::new();
        for (pi, p) in self.rays.iter().enumerate() {
            if !values[pi].is_positive() {
                continue;
            }
            for (ni, n) in self.rays.iter().enumerate() {
                if !values[ni].is_negative() {
                    continue;
                }
                let common = p.active.intersection(&n.active);
                let adjacent = self
                    .rays
                    .iter()
                    .enumerate()
                    .all(|(oi, o)| oi == pi || oi == ni || !o.active.contains_all(&common));
                if !adjacent {
                    continue;
                }
                let combined: Vec<BigInt> = p
                    .v
                    .iter()
                    .zip(&n.v)
                    .map(|(pv, nv)| pv * (-&values[ni]) + nv * &values[pi])
                    .collect();
                let combined = primitive(combined);
                if !combined.iter().all(Zero::is_zero) && !spawned.contains(&combined) {
                    spawned.push(combined);
                }
            }
        }

        let mut next: Vec<Ray> = Vec::new();
        for (i, mut r) in std::mem::take(&mut self.rays).into_iter().enumerate() {
            match values[i].cmp(&BigInt::zero()) {
                Ordering::Greater => next.push(r),
                Ordering::Equal => {
                    r.active.set(idx);
                    next.push(r);
                }
                Ordering::Less => {}
            }
        }
        for v in spawned {
            if next.iter().any(|r| r.v == v) {
                continue;
            }
            let active = self.activity(&v);
            next.push(Ray { v, active });
        }
        self.rays = next;
    }

    fn activity(&self, v: &[BigInt]) -> BitSet {
        let mut active = BitSet::new();
        for (i, c) in self.constraints.iter().enumerate() {
            if dot(c, v).is_zero() {
                active.set(i);
            }
        }
        active
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{self, ConstraintSystem, LinearForm};
    use crate::RationalVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn cone_of(dim: usize, halfspaces: &[&[i64]]) -> Cone {
        let mut c = Cone::full_space(dim).unwrap();
        for h in halfspaces {
            c.add_halfspace(&ints(h)).unwrap();
        }
        c
    }

    #[test]
    fn full_space_has_complete_lineality() {
        let c = Cone::full_space(3).unwrap();
        assert_eq!(c.lineality().len(), 3);
        assert_eq!(c.rays().count(), 0);
        assert!(!c.is_trivial());
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(Cone::full_space(0), Err(Error::EmptyDimension)));
    }

    #[test]
    fn halfspace_in_plane() {
        let c = cone_of(2, &[&[1, 0]]);
        assert_eq!(c.lineality().len(), 1);
        assert!(c.lineality()[0][0].is_zero());
        let rays: Vec<_> = c.rays().collect();
        assert_eq!(rays, vec![&ints(&[1, 0])[..]]);
    }

    #[test]
    fn opposite_halfspaces_leave_a_line() {
        let c = cone_of(2, &[&[1, 0], &[-1, 0]]);
        assert_eq!(c.lineality().len(), 1);
        assert_eq!(c.rays().count(), 0);
        assert!(!c.is_trivial());
    }

    #[test]
    fn orthant_rays_are_standard_basis() {
        let c = cone_of(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(c.lineality().is_empty());
        let mut rays: Vec<Vec<BigInt>> = c.rays().map(|r| r.to_vec()).collect();
        rays.sort();
        assert_eq!(
            rays,
            vec![ints(&[0, 0, 1]), ints(&[0, 1, 0]), ints(&[1, 0, 0])]
        );
    }

    #[test]
    fn four_opposing_halfspaces_pin_the_origin() {
        let c = cone_of(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        assert!(c.is_trivial());
    }

    #[test]
    fn zero_halfspace_is_ignored() {
        let c = cone_of(2, &[&[0, 0]]);
        assert_eq!(c.lineality().len(), 2);
    }

    #[test]
    fn description_satisfies_all_constraints() {
        let mut rng = ChaCha12Rng::seed_from_u64(211);
        for _ in 0..200 {
            let d = rng.random_range(1..=4);
            let m = rng.random_range(0..=7);
            let halfspaces: Vec<Vec<i64>> = (0..m)
                .map(|_| (0..d).map(|_| rng.random_range(-3..=3i64)).collect())
                .collect();
            let refs: Vec<&[i64]> = halfspaces.iter().map(Vec::as_slice).collect();
            let c = cone_of(d, &refs);
            for h in &halfspaces {
                let hb = ints(h);
                for l in c.lineality() {
                    assert!(dot(&hb, l).is_zero(), "lineality leaves a halfspace");
                }
                for r in c.rays() {
                    assert!(!dot(&hb, r).is_negative(), "ray leaves a halfspace");
                }
            }
        }
    }

    /// The description decides "does the cone reach c . x > 0?" by scanning
    /// rays and lineality; an exact feasibility call is the oracle.
    #[test]
    fn strict_reachability_matches_feasibility() {
        let mut rng = ChaCha12Rng::seed_from_u64(223);
        for _ in 0..300 {
            let d = rng.random_range(1..=3);
            let m = rng.random_range(0..=6);
            let halfspaces: Vec<Vec<i64>> = (0..m)
                .map(|_| (0..d).map(|_| rng.random_range(-3..=3i64)).collect())
                .collect();
            let refs: Vec<&[i64]> = halfspaces.iter().map(Vec::as_slice).collect();
            let cone = cone_of(d, &refs);
            let c: Vec<i64> = (0..d).map(|_| rng.random_range(-3..=3i64)).collect();
            let cb = ints(&c);

            let by_description = cone.rays().any(|r| dot(&cb, r).is_positive())
                || cone.lineality().iter().any(|l| !dot(&cb, l).is_zero());

            let mut sys = ConstraintSystem::new(d);
            for h in &halfspaces {
                sys.push_nonstrict(LinearForm::new(RationalVector::from_ints(h)));
            }
            sys.push_strict(LinearForm::new(RationalVector::from_ints(&c)));
            let by_lp = lp::feasible(&sys).unwrap().is_feasible();

            assert_eq!(by_description, by_lp);
        }
    }
}
