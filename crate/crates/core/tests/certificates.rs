//! Certificate verdicts across parameter sweeps, recorded values against
//! independent arithmetic, and byte-stable JSON.

use rand::Rng;
use serde_json::Value;
use torelli_core::certify::{
    casson_unbounded, cayley_diameter, morita_consistency, morita_consistency_split, no_morita,
    not_finite_type, CertifyError, InvariantPair, DEFAULT_MAX_N,
};
use torelli_core::dfloer::{chi_hf_red, DValue};
use torelli_core::selftest::{random_knot, rng_from_seed};
use torelli_core::{Integer, ManifoldExpr};

#[test]
fn cayley_certificates_reach_every_target() {
    for genus in 2..=9u32 {
        let cap = 2 * i64::from((genus / 2).div_ceil(2));
        for target in [1u64, 2, 7, 10, 100, 1000] {
            let c = cayley_diameter(genus, target).unwrap();
            assert!(c.verdict, "{c}");
            let d: i64 = c.value("d").unwrap().parse().unwrap();
            // Any word giving d needs at least |d| / cap letters.
            assert!((d.unsigned_abs()).div_ceil(cap as u64) >= target, "g={genus} N={target}");
        }
    }
    assert!(cayley_diameter(1, 5).is_err());
}

#[test]
fn casson_grows_without_bound_along_norm_one_words() {
    for n in 1..=30 {
        let c = casson_unbounded(n).unwrap();
        assert!(c.verdict, "{c}");
        assert_eq!(c.value("lambda"), Some(n.to_string().as_str()));
        assert_eq!(c.value("norm"), Some("1"));
    }
}

#[test]
fn no_morita_defects_split_by_d() {
    for d in (-20i64..=20).filter(|&d| d != 0) {
        let c = no_morita(d).unwrap();
        assert!(c.verdict, "{c}");
        assert_eq!(c.value("lambda_psi_phi_d").unwrap(), (d + 1).to_string());
        assert_eq!(c.value("defect_difference").unwrap(), d.to_string());
        assert_eq!(c.value("discrepancy"), Some("true"));
    }
    assert!(matches!(no_morita(0), Err(CertifyError::ZeroD)));
}

#[test]
fn brunnian_sums_alternate() {
    for n in 4..=10u32 {
        let c = not_finite_type(n, DEFAULT_MAX_N).unwrap();
        assert!(c.verdict, "{c}");
        assert_eq!(c.value("nonzero_proper_terms"), Some("0"));
        let expected = if n % 2 == 0 { -2 } else { 2 };
        assert_eq!(c.value("alternating_sum").unwrap(), expected.to_string());
        assert_eq!(c.value("lambda_full"), Some("0"));
    }
    assert!(not_finite_type(3, DEFAULT_MAX_N).is_err());
    assert!(not_finite_type(21, DEFAULT_MAX_N).is_err());
}

#[test]
fn euler_characteristic_vanishes_on_poincare_and_sphere() {
    assert_eq!(chi_hf_red(&Integer::from(1), DValue::new(-2).unwrap()), Integer::from(0));
    assert_eq!(chi_hf_red(&Integer::from(0), DValue::ZERO), Integer::from(0));
}

#[test]
fn split_gluings_are_consistent() {
    let mut rng = rng_from_seed(19);
    let mut done = 0;
    while done < 25 {
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
            let k = random_knot(rng, 4);
            let n = if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=3);
            ManifoldExpr::surgery(k, n).unwrap()
        };
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        let Ok(c) = morita_consistency_split(&a, &b) else { continue };
        assert!(c.verdict, "{c}");
        done += 1;
    }
}

#[test]
fn nonadditive_casson_is_rejected() {
    let p = |l: i64, d: i64| InvariantPair { lambda: Integer::from(l), d: DValue::new(d).unwrap() };
    assert!(matches!(
        morita_consistency(&p(3, 0), &p(1, -2), &p(1, -2)),
        Err(CertifyError::NonAdditiveCasson { .. })
    ));
    // With additive lambda the identity holds for any d values.
    for d_ab in [-6i64, -4, -2, 0, 2] {
        let c = morita_consistency(&p(2, d_ab), &p(1, -2), &p(1, -2)).unwrap();
        assert!(c.verdict, "{c}");
    }
}

fn keys_sorted(v: &Value) -> bool {
    match v {
        Value::Object(m) => {
            let keys: Vec<&String> = m.keys().collect();
            keys.windows(2).all(|w| w[0] < w[1]) && m.values().all(keys_sorted)
        }
        Value::Array(a) => a.iter().all(keys_sorted),
        _ => true,
    }
}

#[test]
fn json_is_deterministic_and_sorted() {
    let certs = [
        cayley_diameter(4, 37).unwrap(),
        casson_unbounded(5).unwrap(),
        no_morita(-7).unwrap(),
        not_finite_type(6, DEFAULT_MAX_N).unwrap(),
    ];
    for c in &certs {
        let json = c.to_json();
        let parsed: Value = serde_json::from_str(&json).unwrap();
        assert!(keys_sorted(&parsed));
        assert_eq!(serde_json::to_string_pretty(&parsed).unwrap(), json);
        assert_eq!(parsed["verdict"], Value::Bool(true));
    }
    assert_eq!(no_morita(-7).unwrap().to_json(), certs[2].to_json());
}
