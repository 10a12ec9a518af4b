use proptest::prelude::*;

use concentra::distance::{dilate, envelope};
use concentra::functionals::{
    asymmetry_at, concentration_deficit, equivalent_radius, fraenkel_asymmetry, oscillation_index, tol_disc,
};
use concentra::grid::{resample, sym_diff_area, OverlapCounter};
use concentra::shapes::{generate, Shape, ShapeSpec};
use concentra::steiner::check_polylem;
use concentra::{GridSet, Point};

const H: f64 = 0.1;

fn cell_set() -> impl Strategy<Value = GridSet> {
    prop::collection::vec((-6i64..6, -6i64..6), 1..40).prop_map(|cells| GridSet::from_cells(H, &cells).unwrap())
}

fn blob() -> impl Strategy<Value = GridSet> {
    (2usize..6, 0.05f64..0.3, 0u64..1000).prop_map(|(modes, amplitude, seed)| {
        generate(&ShapeSpec::new(Shape::Blob { radius: 1.0, modes, amplitude }, 0.04).with_seed(seed)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn symmetric_difference_is_a_metric(a in cell_set(), b in cell_set(), c in cell_set()) {
        let ab = sym_diff_area(&a, &b).unwrap();
        prop_assert_eq!(sym_diff_area(&a, &a).unwrap(), 0.0);
        prop_assert_eq!(ab, sym_diff_area(&b, &a).unwrap());
        let via = sym_diff_area(&a, &c).unwrap() + sym_diff_area(&c, &b).unwrap();
        prop_assert!(ab <= via + 1e-12);
    }

    #[test]
    fn area_is_additive(a in cell_set(), b in cell_set()) {
        let lhs = a.union(&b).unwrap().area() + a.intersection(&b).unwrap().area();
        prop_assert!((lhs - a.area() - b.area()).abs() < 1e-12);
    }

    #[test]
    fn dilation_is_monotone(a in cell_set(), b in cell_set(), r in 0.05f64..0.6, dr in 0.0f64..0.4) {
        let ab = a.union(&b).unwrap();
        let da = dilate(&a, r).unwrap();
        prop_assert!(a.is_subset_of(&da).unwrap());
        prop_assert!(da.is_subset_of(&dilate(&ab, r).unwrap()).unwrap());
        prop_assert!(da.is_subset_of(&dilate(&a, r + dr).unwrap()).unwrap());
    }

    #[test]
    fn envelope_identities(a in cell_set(), r in 0.1f64..0.8) {
        let co = envelope(&a, r).unwrap();
        prop_assert!(a.is_subset_of(&co).unwrap());
        prop_assert!(envelope(&co, r).unwrap().same_cells(&co).unwrap());
        prop_assert!(dilate(&a, r).unwrap().same_cells(&dilate(&co, r).unwrap()).unwrap());
    }

    #[test]
    fn asymmetry_is_lipschitz_in_the_center(e in blob(), dx in -0.3f64..0.3, dy in -0.3f64..0.3) {
        let counter = OverlapCounter::new(&e);
        let s = equivalent_radius(&e).unwrap();
        let x = e.centroid().unwrap();
        let y = x + Point::new(dx, dy);
        let gap = (asymmetry_at(&e, &counter, x) - asymmetry_at(&e, &counter, y)).abs();
        // |B(x) Δ B(y)| ≤ 4 s |x − y|, plus one ring of boundary cells per disc
        let slack = 2.0 * 2.0 * std::f64::consts::PI * s * std::f64::consts::SQRT_2 * e.h();
        let bound = 2.0 * (4.0 * s * x.dist(y) + slack) / e.area();
        prop_assert!(gap <= bound, "gap {} bound {}", gap, bound);
    }

    #[test]
    fn deficit_respects_the_concentration_inequality(e in blob(), m in 0.1f64..10.0) {
        let r = m * equivalent_radius(&e).unwrap();
        prop_assert!(concentration_deficit(&e, r).unwrap() >= -tol_disc(&e).unwrap());
    }

    #[test]
    fn asymmetry_and_oscillation_bounds(e in blob()) {
        let a = fraenkel_asymmetry(&e).unwrap();
        prop_assert!((0.0..2.0).contains(&a.alpha));
        let o = oscillation_index(&e, a.center).unwrap();
        prop_assert!(o.beta <= o.beta_star + 1e-12);
        prop_assert!(a.alpha <= o.beta_star + 5.0 * e.h() / equivalent_radius(&e).unwrap());
    }

    #[test]
    fn products_of_squares_satisfy_the_bound(
        roots in prop::collection::vec(-16i32..48, 0..3),
        edge in 0usize..=2,
    ) {
        let mut p = vec![1.0f64];
        let mut mul = |f: &[f64]| {
            let mut out = vec![0.0; p.len() + f.len() - 1];
            for (i, a) in p.iter().enumerate() {
                for (j, b) in f.iter().enumerate() {
                    out[i + j] += a * b;
                }
            }
            p = out;
        };
        for k in &roots {
            let b = *k as f64 / 32.0;
            mul(&[b * b, -2.0 * b, 1.0]);
        }
        for _ in 0..edge {
            mul(&[1.0, -1.0]);
        }
        let check = check_polylem(&p, p.len() - 1).unwrap();
        prop_assert!(check.holds, "{:?}", p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn deficit_is_scale_invariant(seed in 0u64..1000, m in prop::sample::select(vec![0.5, 1.0, 2.0])) {
        let e = generate(&ShapeSpec::new(Shape::Blob { radius: 1.0, modes: 4, amplitude: 0.25 }, 0.04).with_seed(seed)).unwrap();
        let fine = resample(&e, 2).unwrap();
        let r = m * equivalent_radius(&e).unwrap();
        // resample keeps the physical set; stretching it by 2 restores spacing h
        let scaled = fine.rescaled(2.0);
        let d1 = concentration_deficit(&e, r).unwrap();
        let d2 = concentration_deficit(&scaled, 2.0 * r).unwrap();
        prop_assert!((d1 - d2).abs() <= 4.0 * tol_disc(&e).unwrap(), "{} vs {}", d1, d2);
    }
}
