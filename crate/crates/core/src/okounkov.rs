//! Global cones, fiber bodies and the two volume estimators.
//!
//! All claims are exact *at the degree bound* of the semigroup: the global
//! cone is spanned by what is materialized, which is an inner
//! approximation of the true closed cone.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{cone_hull, convex_hull, slice_cone, ConvexCone, Polytope};
use crate::rational::{factorial, QVector, Rat};
use crate::semigroup::{degrees_up_to, GradedSemigroup, RationalDirection, Source};

fn lift(v: &[u32], m: &[u32]) -> Vec<BigInt> {
    v.iter().chain(m).map(|&x| BigInt::from(x)).collect()
}

/// Closed convex cone in `ℝ^(d+r)` spanned by `(v, m)`.
///
/// Uses a generating set rather than every materialized point: the
/// generator list in generator mode and `(vertices of P_i; e_i)` in toric
/// mode. Both span the same cone as all points with `|m| <= B`
/// (see [`global_cone_from_pieces`]).
pub fn global_cone(s: &GradedSemigroup) -> Result<ConvexCone> {
    let (d, r) = (s.d(), s.r());
    let rays: Vec<Vec<BigInt>> = match s.source() {
        Source::Generators(gens) => gens.iter().map(|g| lift(&g.v, g.m.entries())).collect(),
        Source::Toric(polys) => {
            let mut rays = Vec::new();
            for (i, p) in polys.iter().enumerate() {
                let mut e = vec![0u32; r];
                e[i] = 1;
                for v in p.integer_vertices() {
                    let v: Vec<u32> = v.iter().map(|&x| x as u32).collect();
                    rays.push(lift(&v, &e));
                }
            }
            rays
        }
    };
    if rays.is_empty() {
        return Err(Error::EmptyCone);
    }
    cone_hull(&rays, d + r)
}

/// The same cone computed from every materialized point with
/// `|m| <= bound`. Slow; kept as a cross-check.
pub fn global_cone_from_pieces(s: &GradedSemigroup, bound: u32) -> Result<ConvexCone> {
    let mut rays = Vec::new();
    for m in degrees_up_to(s.r(), bound.min(s.bound())) {
        for v in s.piece(&m)?.iter() {
            rays.push(lift(v, m.entries()));
        }
    }
    if rays.is_empty() {
        return Err(Error::EmptyCone);
    }
    cone_hull(&rays, s.d() + s.r())
}

/// Cone of the degree-`p` truncation, spanned by the points of total
/// degree `p`. `None` when there are no such points.
pub fn truncation_cone(s: &GradedSemigroup, p: u32) -> Result<Option<ConvexCone>> {
    let rays: Vec<Vec<BigInt>> = s
        .points_of_total(p)?
        .iter()
        .map(|g| lift(&g.v, g.m.entries()))
        .collect();
    if rays.is_empty() {
        return Ok(None);
    }
    cone_hull(&rays, s.d() + s.r()).map(Some)
}

fn check_direction(s: &GradedSemigroup, a: &RationalDirection) -> Result<()> {
    if a.r() != s.r() {
        return Err(Error::DimensionMismatch { expected: s.r(), found: a.r() });
    }
    Ok(())
}

/// The fiber body `Δ_a` of the global cone over `a`.
pub fn okounkov_body(s: &GradedSemigroup, a: &RationalDirection) -> Result<Polytope> {
    check_direction(s, a)?;
    body_in_cone(&global_cone(s)?, a, s.d())
}

/// Fiber over `a` of an already computed cone.
pub fn body_in_cone(cone: &ConvexCone, a: &RationalDirection, d: usize) -> Result<Polytope> {
    slice_cone(cone, a.coords(), d)
}

/// `d! · vol(Δ_a)`; zero when the fiber is empty or lower dimensional.
pub fn volume_geometric(s: &GradedSemigroup, a: &RationalDirection) -> Result<Rat> {
    Ok(normalized_volume(&okounkov_body(s, a)?))
}

pub fn normalized_volume(p: &Polytope) -> Rat {
    p.volume() * Rat::from_integer(factorial(p.dim()))
}

/// `d! · #Γ_{ka} / k^d` for every `k <= k_max` with `k·a` integral.
pub fn volume_counting(s: &GradedSemigroup, a: &RationalDirection, k_max: u64) -> Result<Vec<(u64, Rat)>> {
    check_direction(s, a)?;
    let d = s.d();
    let dfact = Rat::from_integer(factorial(d));
    let mut out = Vec::new();
    for k in 1..=k_max {
        let Some(m) = a.times(k) else { continue };
        if m.total() > s.bound() as u64 {
            return Err(Error::BeyondBound { degree: m.total(), bound: s.bound() });
        }
        let count = Rat::from_integer(BigInt::from(s.hilbert(&m)?));
        let kd = Rat::from_integer(BigInt::from(k).pow(d as u32));
        out.push((k, &dfact * count / kd));
    }
    Ok(out)
}

/// Index of the group generated by a ray's points inside `ℤ^(d+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeIndex {
    Index(BigInt),
    RankDeficient,
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Index(i) => write!(f, "{i}"),
            LatticeIndex::RankDeficient => f.write_str("rank-deficient"),
        }
    }
}

/// Row-echelon integer basis grown one vector at a time with extended gcd
/// steps. The row lattice never changes, so the product of the pivots is
/// the index of the generated group once it has full rank.
#[derive(Debug, Default)]
struct EchelonBasis {
    rows: Vec<Option<Vec<BigInt>>>,
}

impl EchelonBasis {
    fn new(n: usize) -> Self {
        Self { rows: vec![None; n] }
    }

    fn insert(&mut self, mut v: Vec<BigInt>) {
        for c in 0..v.len() {
            if v[c].is_zero() {
                continue;
            }
            let Some(b) = self.rows[c].take() else {
                if v[c].is_negative() {
                    v.iter_mut().for_each(|x| *x = -&*x);
                }
                self.rows[c] = Some(v);
                return;
            };
            let e = b[c].extended_gcd(&v[c]);
            let (bc, vc) = (&b[c] / &e.gcd, &v[c] / &e.gcd);
            let mut pivot: Vec<BigInt> = b.iter().zip(&v).map(|(x, y)| &e.x * x + &e.y * y).collect();
            let rest: Vec<BigInt> = v.iter().zip(&b).map(|(y, x)| &bc * y - &vc * x).collect();
            if pivot[c].is_negative() {
                pivot.iter_mut().for_each(|x| *x = -&*x);
            }
            self.rows[c] = Some(pivot);
            v = rest;
        }
    }

    fn index(&self) -> Option<BigInt> {
        let mut idx = BigInt::one();
        for (c, row) in self.rows.iter().enumerate() {
            idx *= row.as_ref()?[c].abs();
        }
        Some(idx)
    }
}

/// Diagnostic for counting/geometric agreement along the ray of `a`:
/// the index in `ℤ^(d+1)` of the group generated by `(v, k)` with
/// `v ∈ Γ_{k a'}`, `a'` the primitive integer vector on the ray and
/// `k |a'| <= B`. Triangularization by gcd steps gives the same index as
/// the Smith normal form.
pub fn lattice_index(s: &GradedSemigroup, a: &RationalDirection) -> Result<LatticeIndex> {
    check_direction(s, a)?;
    let prim = RationalDirection::new(a.primitive_integer().to_rat())?;
    let step = prim.sum().to_integer();
    let d = s.d();
    let mut basis = EchelonBasis::new(d + 1);
    let mut any = false;
    let mut k: u64 = 1;
    while BigInt::from(k) * &step <= BigInt::from(s.bound()) {
        for v in s.restrict_ray(&prim, k)? {
            any = true;
            let mut row: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
            row.push(BigInt::from(k));
            basis.insert(row);
        }
        k += 1;
    }
    if !any {
        return Err(Error::EmptyRay);
    }
    Ok(basis.index().map_or(LatticeIndex::RankDeficient, LatticeIndex::Index))
}

/// `conv(Γ_{k a'}) / k` rescaled to `a`, where `a'` is the primitive
/// integer vector on the ray: the body seen by one singly graded piece.
pub fn restricted_ray_body(s: &GradedSemigroup, a: &RationalDirection, k: u64) -> Result<Polytope> {
    check_direction(s, a)?;
    let prim = a.primitive_integer();
    let m = prim.scale(k as u32);
    let pts: Vec<QVector> = s
        .piece(&m)?
        .iter()
        .map(|v| v.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect())
        .collect();
    if pts.is_empty() {
        return Ok(Polytope::empty(s.d()));
    }
    // a = (|a| / |a'|) a'
    let lambda = a.sum() / Rat::from_integer(BigInt::from(prim.total() * k));
    Ok(convex_hull(&pts, s.d())?.scale(&lambda))
}

/// Both volume estimators and the lattice diagnostic along one direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeEstimate {
    pub direction: RationalDirection,
    pub geometric: Rat,
    pub counting: Vec<(u64, Rat)>,
    pub lattice_index: LatticeIndex,
}

pub fn estimate_volume(s: &GradedSemigroup, a: &RationalDirection, k_max: u64) -> Result<VolumeEstimate> {
    Ok(VolumeEstimate {
        direction: a.clone(),
        geometric: volume_geometric(s, a)?,
        counting: volume_counting(s, a, k_max)?,
        lattice_index: lattice_index(s, a)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::contains;
    use crate::models::{fixtures, toric_fiber_oracle};
    use crate::rational::{int, qvec, rat};
    use crate::semigroup::GradedPoint;

    fn dir(c: &[(i64, i64)]) -> RationalDirection {
        RationalDirection::new(qvec(c)).unwrap()
    }

    fn segment(lo: Rat, hi: Rat) -> Polytope {
        convex_hull(&[vec![lo], vec![hi]], 1).unwrap()
    }

    #[test]
    fn e1_cone_rays() {
        let cone = global_cone(&fixtures::e1()).unwrap();
        let expect: Vec<Vec<BigInt>> = [[0, 0, 1], [0, 1, 0], [3, 0, 1], [7, 2, 0]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(cone.rays(), expect.as_slice());
        assert_eq!(cone, global_cone_from_pieces(&fixtures::e1(), 12).unwrap());
    }

    #[test]
    fn e2_cone_matches_materialized_points() {
        let e2 = fixtures::e2();
        assert_eq!(global_cone(&e2).unwrap(), global_cone_from_pieces(&e2, 3).unwrap());
        assert_eq!(global_cone(&e2).unwrap().rays().len(), 7);
    }

    #[test]
    fn single_generator() {
        let s = GradedSemigroup::from_generators(1, 1, vec![GradedPoint::new(vec![1], vec![1])], 6).unwrap();
        let cone = global_cone(&s).unwrap();
        assert_eq!(cone.rays(), &[vec![BigInt::from(1), BigInt::from(1)]]);
        let a = dir(&[(1, 1)]);
        assert_eq!(volume_geometric(&s, &a).unwrap(), int(0));
        let counts = volume_counting(&s, &a, 4).unwrap();
        assert_eq!(counts, vec![(1, int(1)), (2, rat(1, 2)), (3, rat(1, 3)), (4, rat(1, 4))]);
        assert_eq!(lattice_index(&s, &a).unwrap(), LatticeIndex::RankDeficient);
    }

    #[test]
    fn e1_bodies() {
        let e1 = fixtures::e1();
        assert_eq!(okounkov_body(&e1, &dir(&[(1, 1), (0, 1)])).unwrap(), segment(int(0), rat(7, 2)));
        assert_eq!(okounkov_body(&e1, &dir(&[(0, 1), (1, 1)])).unwrap(), segment(int(0), int(3)));
        assert_eq!(okounkov_body(&e1, &dir(&[(1, 2), (1, 2)])).unwrap(), segment(int(0), rat(13, 4)));
        assert_eq!(volume_geometric(&e1, &dir(&[(1, 1), (0, 1)])).unwrap(), rat(7, 2));
    }

    #[test]
    fn e2_volumes() {
        let e2 = fixtures::e2();
        let half = dir(&[(1, 2), (1, 2)]);
        assert_eq!(volume_geometric(&e2, &half).unwrap(), rat(7, 4));
        assert_eq!(okounkov_body(&e2, &half).unwrap(), toric_fiber_oracle(&fixtures::e2_polytopes(), &half).unwrap());
        assert_eq!(volume_geometric(&e2, &dir(&[(1, 3), (2, 3)])).unwrap(), rat(14, 9));
    }

    #[test]
    fn counting_values() {
        let e1 = fixtures::e1();
        let c = volume_counting(&e1, &dir(&[(1, 1), (0, 1)]), 10).unwrap();
        assert_eq!(c[9], (10, int(3)));
        let e2 = fixtures::e2();
        let c = volume_counting(&e2, &dir(&[(1, 1), (0, 1)]), 5).unwrap();
        assert_eq!(c[4], (5, rat(72, 25)));
        // k·a integral only for even k
        let c = volume_counting(&e2, &dir(&[(1, 2), (1, 2)]), 6).unwrap();
        assert_eq!(c.iter().map(|x| x.0).collect::<Vec<_>>(), vec![2, 4, 6]);
        assert!(matches!(
            volume_counting(&e2, &dir(&[(1, 1), (0, 1)]), 13),
            Err(Error::BeyondBound { degree: 13, bound: 12 })
        ));
    }

    #[test]
    fn lattice_indices() {
        assert_eq!(lattice_index(&fixtures::e1(), &dir(&[(1, 1), (0, 1)])).unwrap(), LatticeIndex::Index(1.into()));
        let s = GradedSemigroup::from_generators(
            1,
            1,
            vec![GradedPoint::new(vec![0], vec![1]), GradedPoint::new(vec![2], vec![1])],
            8,
        )
        .unwrap();
        assert_eq!(lattice_index(&s, &dir(&[(1, 1)])).unwrap(), LatticeIndex::Index(2.into()));
        let e2 = fixtures::e2();
        assert_eq!(lattice_index(&e2, &dir(&[(1, 2), (1, 2)])).unwrap(), LatticeIndex::Index(1.into()));
    }

    #[test]
    fn empty_ray() {
        let s = GradedSemigroup::from_generators(1, 2, vec![GradedPoint::new(vec![1], vec![1, 0])], 4).unwrap();
        assert_eq!(lattice_index(&s, &dir(&[(0, 1), (1, 1)])).unwrap_err(), Error::EmptyRay);
        assert!(okounkov_body(&s, &dir(&[(0, 1), (1, 1)])).unwrap().is_empty());
        assert_eq!(volume_geometric(&s, &dir(&[(0, 1), (1, 1)])).unwrap(), int(0));
    }

    #[test]
    fn homogeneity_and_truncation() {
        let e1 = fixtures::e1();
        let a = dir(&[(1, 3), (2, 3)]);
        let body = okounkov_body(&e1, &a).unwrap();
        for lam in [rat(1, 2), int(2), rat(7, 3)] {
            assert_eq!(okounkov_body(&e1, &a.scaled(&lam).unwrap()).unwrap(), body.scale(&lam));
        }
        for p in 1..=4 {
            let t = e1.truncate(p).unwrap();
            assert!(contains(&body, &okounkov_body(&t, &a).unwrap()).unwrap());
        }
    }

    #[test]
    fn truncation_cone_matches_truncated_semigroup() {
        for s in [fixtures::e1(), fixtures::e2()] {
            for p in 1..=3 {
                let direct = truncation_cone(&s, p).unwrap().unwrap();
                assert_eq!(direct, global_cone(&s.truncate(p).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn toric_boundary_matches_ray_body() {
        let e2 = fixtures::e2();
        for a in [dir(&[(1, 1), (0, 1)]), dir(&[(0, 1), (1, 1)])] {
            assert_eq!(okounkov_body(&e2, &a).unwrap(), restricted_ray_body(&e2, &a, 3).unwrap());
        }
    }
}
