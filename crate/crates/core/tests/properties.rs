use num_bigint::BigInt;
use num_traits::{One, Zero};
use okounkov::fujita::{check_minkowski_bound, fujita_ratio, simplex_grid};
use okounkov::geometry::{
    brunn_minkowski_margin, cone_hull, contains, convex_hull, minkowski_weighted, polytope_volume, Margin, Polytope,
};
use okounkov::models::{parse_model, random_model, serialize_model, toric_fiber_oracle, toric_model, LatticePolytope, RandomModelSpec};
use okounkov::okounkov::{okounkov_body, volume_geometric};
use okounkov::semigroup::RationalDirection;
use okounkov::{Error, QVector, Rat};
use proptest::prelude::*;

fn r(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn q(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn points(dim: usize, max: i64, count: std::ops::Range<usize>) -> impl Strategy<Value = Vec<QVector>> {
    prop::collection::vec(prop::collection::vec(0..=max, dim), count)
        .prop_map(|pts| pts.into_iter().map(|p| p.into_iter().map(r).collect()).collect())
}

fn full_polygon() -> impl Strategy<Value = Polytope> {
    points(2, 8, 3..7)
        .prop_map(|pts| convex_hull(&pts, 2).unwrap())
        .prop_filter("full dimensional", |p| p.is_full_dimensional())
}

fn direction2() -> impl Strategy<Value = RationalDirection> {
    (0i64..=6, 1i64..=6)
        .prop_filter("i <= q", |(i, d)| i <= d)
        .prop_map(|(i, d)| RationalDirection::new(vec![q(i, d), q(d - i, d)]).unwrap())
}

fn model_spec() -> impl Strategy<Value = RandomModelSpec> {
    (1usize..=2, 2usize..=6, any::<u64>()).prop_map(|(d, n_gens, seed)| RandomModelSpec {
        d,
        r: 2,
        n_gens,
        v_max: 6,
        m_max: 2,
        seed,
        bound: 10,
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn hull_is_idempotent(pts in points(3, 5, 1..9)) {
        let h = convex_hull(&pts, 3).unwrap();
        prop_assert_eq!(convex_hull(h.vertices(), 3).unwrap(), h.clone());
        for p in &pts {
            prop_assert!(h.contains_point(p));
        }
    }

    #[test]
    fn volume_is_monotone(pts in points(3, 5, 4..8), extra in points(3, 6, 1..4)) {
        let small = convex_hull(&pts, 3).unwrap();
        let mut all = pts.clone();
        all.extend(extra);
        let big = convex_hull(&all, 3).unwrap();
        prop_assert!(contains(&big, &small).unwrap());
        prop_assert!(polytope_volume(&small) <= polytope_volume(&big));
    }

    #[test]
    fn volume_is_homogeneous_and_translation_invariant(
        pts in points(3, 4, 4..8),
        num in 1i64..5,
        den in 1i64..4,
        shift in prop::collection::vec(-5i64..5, 3),
    ) {
        let p = convex_hull(&pts, 3).unwrap();
        let lam = q(num, den);
        let scaled = p.scale(&lam);
        prop_assert_eq!(polytope_volume(&scaled), polytope_volume(&p) * &lam * &lam * &lam);
        let shift: QVector = shift.into_iter().map(r).collect();
        prop_assert_eq!(polytope_volume(&p.translate(&shift).unwrap()), polytope_volume(&p));
    }

    #[test]
    fn brunn_minkowski_never_violated(a in full_polygon(), b in full_polygon()) {
        let m = brunn_minkowski_margin(&a, &b).unwrap();
        prop_assert!(m != Margin::Violation && m != Margin::Indeterminate);
        let sum = minkowski_weighted(&[a.clone(), b.clone()], &[r(1), r(1)]).unwrap();
        prop_assert!(polytope_volume(&sum) >= polytope_volume(&a) + polytope_volume(&b));
    }

    #[test]
    fn homothetic_pairs_are_equal(a in full_polygon(), k in 1i64..4, den in 1i64..3) {
        let b = a.scale(&q(k, den)).translate(&[r(1), r(2)]).unwrap();
        prop_assert_eq!(brunn_minkowski_margin(&a, &b).unwrap(), Margin::Equal);
    }

    #[test]
    fn cone_round_trip(rays in prop::collection::vec(prop::collection::vec(0i64..5, 3), 1..8)) {
        // keep the last coordinate positive so the cone is pointed
        let rays: Vec<Vec<BigInt>> = rays
            .into_iter()
            .map(|mut v| { v[2] += 1; v.into_iter().map(BigInt::from).collect() })
            .collect();
        let cone = cone_hull(&rays, 3).unwrap();
        prop_assert!(cone.cross_validate());
        for ray in &rays {
            let x: QVector = ray.iter().cloned().map(Rat::from_integer).collect();
            prop_assert!(cone.contains_point(&x));
        }
        let again = cone_hull(cone.rays(), 3).unwrap();
        prop_assert_eq!(again.rays(), cone.rays());
        prop_assert_eq!(again.halfspaces(), cone.halfspaces());
    }

    #[test]
    fn containment_step_holds(spec in model_spec(), n in 1u32..4, cell_pick in any::<usize>(), w in 0i64..=8, p in 1u32..=3) {
        let s = random_model(&spec).unwrap();
        let grid = simplex_grid(2, n);
        let cell = &grid.cells[cell_pick % grid.cells.len()];
        let t = q(w, 8);
        let coords: QVector = (0..2)
            .map(|i| &t * &cell[0].coords()[i] + (Rat::one() - &t) * &cell[1].coords()[i])
            .collect();
        let a = RationalDirection::new(coords).unwrap();
        match check_minkowski_bound(&s, p, cell, &a) {
            Ok(chk) => {
                prop_assert!(chk.containment);
                prop_assert!(chk.volume_bound);
            }
            Err(Error::EmptyCone) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn ratio_is_scale_invariant(a in direction2(), num in 1i64..5, den in 1i64..4, p in 1u32..=4) {
        let e1 = okounkov::models::fixtures::e1();
        let b = a.scaled(&q(num, den)).unwrap();
        let x = fujita_ratio(&e1, p, &a).unwrap();
        prop_assert_eq!(fujita_ratio(&e1, p, &b).unwrap(), x.clone());
        prop_assert!(x >= Rat::zero() && x <= Rat::one());
    }

    #[test]
    fn fiber_volume_is_homogeneous(spec in model_spec(), a in direction2(), lam in 1i64..4) {
        let s = random_model(&spec).unwrap();
        if let Ok(v) = volume_geometric(&s, &a) {
            let scaled = volume_geometric(&s, &a.scaled(&r(lam)).unwrap()).unwrap();
            prop_assert_eq!(scaled, v * r(lam.pow(spec.d as u32)));
        }
    }

    #[test]
    fn fibers_are_convex_in_the_direction(a1 in direction2(), a2 in direction2(), w in 0i64..=6) {
        let e1 = okounkov::models::fixtures::e1();
        let t = q(w, 6);
        let coords: QVector = (0..2)
            .map(|i| &t * &a1.coords()[i] + (Rat::one() - &t) * &a2.coords()[i])
            .collect();
        let mid = RationalDirection::new(coords).unwrap();
        let combo = minkowski_weighted(
            &[okounkov_body(&e1, &a1).unwrap(), okounkov_body(&e1, &a2).unwrap()],
            &[t.clone(), Rat::one() - &t],
        )
        .unwrap();
        prop_assert!(contains(&okounkov_body(&e1, &mid).unwrap(), &combo).unwrap());
    }

    #[test]
    fn toric_fibers_match_oracle(
        p1 in prop::collection::vec(prop::collection::vec(0i64..4, 2), 3..6),
        p2 in prop::collection::vec(prop::collection::vec(0i64..4, 2), 3..6),
        a in direction2(),
    ) {
        let (Ok(l1), Ok(l2)) = (LatticePolytope::new(&p1), LatticePolytope::new(&p2)) else {
            return Ok(());
        };
        let polys = vec![l1, l2];
        let Ok(s) = toric_model(polys.clone(), 4) else { return Ok(()) };
        prop_assert_eq!(okounkov_body(&s, &a).unwrap(), toric_fiber_oracle(&polys, &a).unwrap());
    }

    #[test]
    fn serializer_round_trip(spec in model_spec()) {
        let s = random_model(&spec).unwrap();
        let text = serialize_model(&s);
        let back = parse_model(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(serialize_model(&back), text);
    }
}
