//! Randomized invariants for the order oracles, region calculus, linear
//! algebra kernel and the distance pseudometric.

use proptest::prelude::*;
use scottpersist::cell::{sections, CellModule};
use scottpersist::linalg::RatMatrix;
use scottpersist::metrics::{distance_indicator, DistanceValue, SuperlinearFamily};
use scottpersist::poset::{Point, PosetSpec};
use scottpersist::rat::{rat, rat_int, Rat};
use scottpersist::region::{DownSetRegion, Flavor, Region, UpSetRegion};

fn arb_rat() -> impl Strategy<Value = Rat> {
    (1i64..=4, -20i64..=20).prop_map(|(den, num)| rat(num, den))
}

fn arb_point(n: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(arb_rat(), n).prop_map(Point)
}

fn arb_gens(n: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(arb_point(n), 1..=4)
}

fn arb_flavor() -> impl Strategy<Value = Flavor> {
    prop_oneof![Just(Flavor::Closed), Just(Flavor::Open)]
}

fn posets(n: usize) -> Vec<PosetSpec> {
    vec![
        PosetSpec::RnStandard(n),
        PosetSpec::cone(RatMatrix::identity(n)).unwrap(),
    ]
}

proptest! {
    #[test]
    fn way_below_implies_le(x in arb_point(2), y in arb_point(2)) {
        for poset in posets(2) {
            if poset.way_below(&x, &y).unwrap() {
                prop_assert!(poset.le(&x, &y).unwrap());
            }
        }
    }

    #[test]
    fn way_below_transitivity(x in arb_point(2), y in arb_point(2), z in arb_point(2)) {
        for poset in posets(2) {
            if poset.le(&x, &y).unwrap() && poset.way_below(&y, &z).unwrap() {
                prop_assert!(poset.way_below(&x, &z).unwrap());
            }
            if poset.way_below(&x, &y).unwrap() && poset.le(&y, &z).unwrap() {
                prop_assert!(poset.way_below(&x, &z).unwrap());
            }
        }
    }

    #[test]
    fn interpolation_holds(x in arb_point(2), z in arb_point(2)) {
        for poset in posets(2) {
            if poset.way_below(&x, &z).unwrap() {
                let y = poset.interpolate(&x, &z).unwrap();
                prop_assert!(poset.way_below(&x, &y).unwrap());
                prop_assert!(poset.way_below(&y, &z).unwrap());
            }
        }
    }

    #[test]
    fn cone_with_identity_facets_matches_standard(x in arb_point(2), y in arb_point(2)) {
        let [standard, cone] = <[PosetSpec; 2]>::try_from(posets(2)).unwrap();
        prop_assert_eq!(standard.le(&x, &y).unwrap(), cone.le(&x, &y).unwrap());
        prop_assert_eq!(standard.way_below(&x, &y).unwrap(), cone.way_below(&x, &y).unwrap());
    }

    #[test]
    fn finite_way_below_is_le(a in 0usize..4, b in 0usize..4) {
        let poset = PosetSpec::finite(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let (x, y) = (Point(vec![rat_int(a as i64)]), Point(vec![rat_int(b as i64)]));
        prop_assert_eq!(poset.way_below(&x, &y).unwrap(), poset.le(&x, &y).unwrap());
    }

    #[test]
    fn interior_closure_idempotent_and_nested(
        gens in arb_gens(2),
        flavor in arb_flavor(),
        p in arb_point(2),
    ) {
        let poset = PosetSpec::RnStandard(2);
        let u = UpSetRegion::new(flavor, gens.clone(), poset.clone()).unwrap();
        let int_u = u.interior().unwrap();
        let cl_u = u.closure().unwrap();
        prop_assert_eq!(&int_u.interior().unwrap(), &int_u);
        prop_assert_eq!(&cl_u.closure().unwrap(), &cl_u);
        if int_u.contains(&p).unwrap() {
            prop_assert!(u.contains(&p).unwrap());
        }
        if u.contains(&p).unwrap() {
            prop_assert!(cl_u.contains(&p).unwrap());
        }
        let d = DownSetRegion::new(flavor, gens, poset).unwrap();
        let int_d = d.interior().unwrap();
        let cl_d = d.closure().unwrap();
        prop_assert_eq!(&int_d.interior().unwrap(), &int_d);
        prop_assert_eq!(&cl_d.closure().unwrap(), &cl_d);
        if int_d.contains(&p).unwrap() {
            prop_assert!(d.contains(&p).unwrap());
        }
        if d.contains(&p).unwrap() {
            prop_assert!(cl_d.contains(&p).unwrap());
        }
    }

    #[test]
    fn antichain_reduction_preserves_membership(
        gens in arb_gens(2),
        flavor in arb_flavor(),
        p in arb_point(2),
    ) {
        let poset = PosetSpec::RnStandard(2);
        let u = UpSetRegion::new(flavor, gens.clone(), poset.clone()).unwrap();
        // recompute membership from the raw, unreduced generator list
        let raw_up = gens.iter().any(|g| match flavor {
            Flavor::Closed => poset.le(g, &p).unwrap(),
            Flavor::Open => poset.way_below(g, &p).unwrap(),
        });
        prop_assert_eq!(u.contains(&p).unwrap(), raw_up);
        let d = DownSetRegion::new(flavor, gens.clone(), poset.clone()).unwrap();
        let raw_down = gens.iter().any(|g| match flavor {
            Flavor::Closed => poset.le(&p, g).unwrap(),
            Flavor::Open => poset.way_below(&p, g).unwrap(),
        });
        prop_assert_eq!(d.contains(&p).unwrap(), raw_down);
    }

    #[test]
    fn rank_nullity_and_exact_kernels(
        entries in prop::collection::vec(-3i64..=3, 12),
    ) {
        let a = RatMatrix::from_fn(3, 4, |i, j| rat_int(entries[4 * i + j]));
        let k = a.kernel_basis();
        prop_assert_eq!(a.rank() + k.cols(), 4);
        prop_assert!(a.mul(&k).is_zero());
        let q = RatMatrix::quotient_map(3, &a.image_basis());
        prop_assert!(q.mul(&a).is_zero());
    }

    #[test]
    fn indicator_matches_membership(
        gens in arb_gens(2),
        flavor in arb_flavor(),
        p in arb_point(2),
    ) {
        let r = Region::Up(UpSetRegion::new(flavor, gens, PosetSpec::RnStandard(2)).unwrap());
        let m = CellModule::indicator(&r).unwrap();
        let want = usize::from(r.contains(&p).unwrap());
        prop_assert_eq!(m.dim_at(&p).unwrap(), want);
    }

    #[test]
    fn principal_sections_are_stalks(gens in arb_gens(2), x in arb_point(2)) {
        let poset = PosetSpec::RnStandard(2);
        let r = Region::Down(DownSetRegion::new(Flavor::Closed, gens, poset.clone()).unwrap());
        let m = CellModule::indicator(&r).unwrap();
        let principal = UpSetRegion::new(Flavor::Closed, vec![x.clone()], poset).unwrap();
        prop_assert_eq!(sections(&m, &principal).unwrap().dim, m.dim_at(&x).unwrap());
    }

    #[test]
    fn indicator_distance_is_a_pseudometric(
        g1 in arb_gens(2),
        g2 in arb_gens(2),
        g3 in arb_gens(2),
    ) {
        let poset = PosetSpec::RnStandard(2);
        let fam = SuperlinearFamily::new(Point(vec![rat_int(1), rat_int(1)])).unwrap();
        let mk = |g: Vec<Point>| Region::Up(UpSetRegion::new(Flavor::Closed, g, poset.clone()).unwrap());
        let (a, b, c) = (mk(g1), mk(g2), mk(g3));
        let dab = distance_indicator(&a, &b, &fam).unwrap();
        prop_assert_eq!(distance_indicator(&a, &a, &fam).unwrap(), DistanceValue::Finite(rat_int(0)));
        prop_assert_eq!(&distance_indicator(&b, &a, &fam).unwrap(), &dab);
        let dac = distance_indicator(&a, &c, &fam).unwrap();
        let dcb = distance_indicator(&c, &b, &fam).unwrap();
        if let (DistanceValue::Finite(x), DistanceValue::Finite(y), DistanceValue::Finite(z)) =
            (&dab, &dac, &dcb)
        {
            prop_assert!(x <= &(y + z));
        }
    }
}
