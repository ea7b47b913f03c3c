use std::f64::consts::{PI, TAU};

use prodsat_core::bloch::{interval_of, AngleBox, RegionAssignment};
use prodsat_core::geometry::{convex_hull, minkowski_sum, polyenc, AnnularSector};
use prodsat_core::{check_constraint, random_instance, Complex, QsatInstance};
use proptest::prelude::*;

fn sector() -> impl Strategy<Value = AnnularSector> {
    (0.0..1.0f64, 0.0..1.0f64, 0.0..TAU, 0.0..TAU)
        .prop_map(|(a, b, phi0, w)| AnnularSector::new(a * b, 2.0 * b.max(a * b), phi0, phi0 + w).unwrap())
}

fn polygon() -> impl Strategy<Value = Vec<Complex>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 1..12)
        .prop_map(|v| v.into_iter().map(|(x, y)| Complex::new(x, y)).collect())
}

fn bits(max: usize) -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), 0..max)
}

fn theta_box(tbits: &[bool], pbits: &[bool]) -> AngleBox {
    let mut t = vec![false];
    t.extend_from_slice(tbits);
    AngleBox { theta: interval_of(&t), phi: interval_of(pbits) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn polyenc_covers_its_sector(s in sector(), f in prop::sample::select(vec![1u32, 4, 16]), u in 0.0..=1.0f64, v in 0.0..=1.0f64) {
        let p = polyenc(&s, f).unwrap();
        let r = (s.r0() * s.r0() + u * (s.r1() * s.r1() - s.r0() * s.r0())).sqrt();
        let z = Complex::from_polar(r, s.phi0() + v * s.width());
        prop_assert!(p.contains_point(z, 1e-9));
    }

    #[test]
    fn origin_test_is_monotone_in_eps(pts in polygon(), e1 in 0.0..1e-3f64, extra in 0.0..1e-3f64) {
        let p = convex_hull(&pts);
        if p.contains_origin(e1) {
            prop_assert!(p.contains_origin(e1 + extra));
        }
    }

    #[test]
    fn minkowski_sum_is_commutative_and_adds_areas(a in polygon(), b in polygon()) {
        let (a, b) = (convex_hull(&a), convex_hull(&b));
        let ab = minkowski_sum(&a, &b);
        let ba = minkowski_sum(&b, &a);
        prop_assert_eq!(ab.len(), ba.len());
        prop_assert!((ab.area() - ba.area()).abs() < 1e-9);
        // Brunn-Minkowski in the plane: sqrt areas are superadditive
        prop_assert!(ab.area().sqrt() + 1e-9 >= a.area().sqrt() + b.area().sqrt());
    }

    #[test]
    fn sector_product_contains_pointwise_products(s in sector(), t in sector(), u in 0.0..=1.0f64, v in 0.0..=1.0f64) {
        let at = |x: &AnnularSector, a: f64, b: f64| x.point_at(x.r0() + a * (x.r1() - x.r0()), b);
        let z = at(&s, u, v) * at(&t, v, u);
        prop_assert!(s.product(&t).contains(z, 1e-9));
    }

    #[test]
    fn json_round_trip(n in 3usize..6, m in 1usize..6, seed in any::<u64>()) {
        let inst = random_instance(n, 3, m, seed).unwrap();
        let back = QsatInstance::from_json(&inst.to_json()).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert!(back.validate().is_ok());
    }

    #[test]
    fn assignment_boxes_nest_under_prefixes(n in 1usize..4, depth in 1u32..9, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let w = 2 * depth as usize - 1;
        let sigma = RegionAssignment::from_bits(n, depth, (0..n * w).map(|_| rng.gen()).collect());
        for q in 0..n {
            let full = sigma.box_of(q);
            prop_assert!((full.theta.width() - PI / f64::from(1u32 << (depth - 1))).abs() < 1e-12);
            for dp in 0..=depth {
                for dt in 0..depth {
                    prop_assert!(full.is_subset_of(&sigma.prefix_box(q, dp, dt)));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn refinement_keeps_refutations(
        seed in 0u64..1000,
        t in prop::collection::vec(bits(6), 2),
        p in prop::collection::vec(bits(7), 2),
        q in 0usize..2,
        child in any::<bool>(),
        on_theta in any::<bool>(),
    ) {
        let inst = random_instance(2, 2, 1, seed).unwrap();
        let c = &inst.constraints[0];
        let boxes: Vec<AngleBox> = (0..2).map(|j| theta_box(&t[j], &p[j])).collect();
        if check_constraint(c, &boxes, 4, 1e-9).unwrap().is_refuted() {
            let (mut t2, mut p2) = (t.clone(), p.clone());
            if on_theta { t2[q].push(child) } else { p2[q].push(child) }
            let sub: Vec<AngleBox> = (0..2).map(|j| theta_box(&t2[j], &p2[j])).collect();
            prop_assert!(sub[q].is_subset_of(&boxes[q]));
            prop_assert!(check_constraint(c, &sub, 4, 1e-9).unwrap().is_refuted());
        }
    }
}
