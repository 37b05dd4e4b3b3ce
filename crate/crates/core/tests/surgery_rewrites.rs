//! Rewrite moves preserve `|H_1|` and the linking-matrix symmetry on
//! randomized presentations; cable-with-earrings links reduce to `S^3`.

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use torelli_core::selftest::{random_jlink, random_presentation, rng_from_seed};
use torelli_core::surgery::{
    annulus_pair_eliminate, blow_down, build_brunnian, integerize, rational, reduce, slam_dunk,
    CurveSpec, ReduceOutcome, SurgeryPresentation,
};
use torelli_core::{Integer, ManifoldExpr, Rational};

/// Determinant of the linking matrix by plain rational Gaussian
/// elimination, times the product of the denominators.
fn order_oracle(p: &SurgeryPresentation) -> Integer {
    let mut m = p.linking_matrix().entries;
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Integer::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col].clone();
        for r in col + 1..n {
            let f = m[r][col].clone() / m[col][col].clone();
            for c in col..n {
                let v = m[col][c].clone() * f.clone();
                m[r][c] -= v;
            }
        }
    }
    let denoms: Integer = p.components().iter().map(|c| c.coeff.denom().clone()).product();
    let v = det * Rational::from_integer(denoms);
    assert!(v.is_integer());
    v.to_integer().abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn moves_preserve_homology(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let p = random_presentation(&mut rng);
        let order = p.homology_order();
        prop_assert_eq!(&order, &order_oracle(&p));
        let q = integerize(&p);
        prop_assert_eq!(&q.homology_order(), &order);
        prop_assert!(q.linking_matrix().is_symmetric());
        q.validate().unwrap();
        for c in p.components() {
            if c.curve.is_unknotted() && c.coeff.is_integer() && c.coeff.abs().is_one() {
                let r = blow_down(&p, c.id).unwrap();
                prop_assert_eq!(&r.homology_order(), &order);
                prop_assert!(r.linking_matrix().is_symmetric());
            }
        }
    }

    #[test]
    fn cable_links_eliminate_to_sphere(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let j = random_jlink(&mut rng, 3, 5, 5);
        prop_assert_eq!(j.homology_order(), Integer::one());
        let mut cur = j.clone();
        while let Some(pair) = cur.components().iter().find_map(|c| c.annulus_with.map(|b| (c.id, b))) {
            let rest: Vec<_> = cur
                .components()
                .iter()
                .filter(|c| c.id != pair.0 && c.id != pair.1 && !cur.meridians_of(pair.0).contains(&c.id) && !cur.meridians_of(pair.1).contains(&c.id))
                .cloned()
                .collect();
            cur = annulus_pair_eliminate(&cur, pair).unwrap();
            prop_assert_eq!(cur.components(), &rest[..]);
            prop_assert_eq!(cur.homology_order(), Integer::one());
        }
        prop_assert!(cur.is_empty());
        let reduced = matches!(reduce(&j).unwrap(), ReduceOutcome::Manifold { result: ManifoldExpr::Sphere, .. });
        prop_assert!(reduced);
    }

    #[test]
    fn earring_round_trip(s in -6i64..=6, n in prop_oneof![-7i64..=-1, 1i64..=7]) {
        let mut p = SurgeryPresentation::empty();
        let k = p.add(CurveSpec::Knot("T(2,5)".parse().unwrap()), rational(s * n - 1, n));
        let q = integerize(&p);
        let back = match q.meridians_of(k).as_slice() {
            [] => q.clone(),
            [m] => slam_dunk(&q, *m).unwrap(),
            _ => unreachable!(),
        };
        prop_assert_eq!(back, p);
    }
}

#[test]
fn earring_blow_down_for_unit_n() {
    for n in [-1i64, 1] {
        for s in -4..=4 {
            let mut p = SurgeryPresentation::empty();
            let k = p.add(CurveSpec::Knot("mT(2,3)".parse().unwrap()), rational(s, 1));
            let m = p.add(CurveSpec::MeridianOf(k), rational(n, 1));
            p.set_linking(k, m, Integer::one());
            let r = blow_down(&p, m).unwrap();
            assert_eq!(r.component(k).unwrap().coeff, rational(s * n - 1, n));
            assert_eq!(r.homology_order(), p.homology_order());
        }
    }
}

#[test]
fn brunnian_family_is_trivial_in_homology() {
    for n in 3..=12 {
        let p = build_brunnian(n).unwrap();
        assert_eq!(p.homology_order(), Integer::one());
        assert_eq!(order_oracle(&p), Integer::one());
    }
}
