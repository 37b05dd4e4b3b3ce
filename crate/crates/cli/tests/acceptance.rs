//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_traits::{One, Signed};
use rand::Rng;
use torelli_core::casson::casson_surgery;
use torelli_core::certify::{self, DEFAULT_MAX_N};
use torelli_core::dfloer::{brieskorn_family, chi_hf_red, d_manifold, DValue};
use torelli_core::knots::{seifert_genus, v_invariant};
use torelli_core::selftest::{random_jlink, random_knot, random_presentation, random_word, rng_from_seed};
use torelli_core::surgery::{annulus_pair_eliminate, blow_down, integerize, reduce, ReduceOutcome};
use torelli_core::torelli::{assemble, generator_defect_bound, surgery_bound, word_bound, Generator, TorelliWord};
use torelli_core::{Integer, KnotSpec, ManifoldExpr};

type Check = Result<String, String>;

fn timed<F: FnOnce() -> Check>(limit: Option<Duration>, f: F) -> Check {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    match limit {
        Some(l) if took > l => Err(format!("{detail}; took {took:.2?}, limit {l:?}")),
        _ => Ok(format!("{detail}; {took:.2?}")),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1() -> Check {
    timed(Some(Duration::from_millis(100)), || {
        let o = Command::new(env!("CARGO_BIN_EXE_torelli-calc"))
            .args(["casson", "T(2,3)", "1"])
            .output()
            .map_err(|e| e.to_string())?;
        let out = String::from_utf8_lossy(&o.stdout).trim().to_string();
        ensure(o.status.success() && out == "1", || format!("got {out:?}, status {:?}", o.status))?;
        Ok("lambda = 1".into())
    })
}

fn c2() -> Check {
    timed(Some(Duration::from_secs(1)), || {
        for n in 1..=100 {
            let k = KnotSpec::twist_family(n).map_err(|e| e.to_string())?;
            let l = casson_surgery(&k, 1).map_err(|e| e.to_string())?;
            ensure(l == Integer::from(n), || format!("K_{n}: lambda = {l}"))?;
        }
        Ok("n = 1..100".into())
    })
}

fn c3() -> Check {
    for d in (-20i64..=20).filter(|&d| d != 0) {
        let c = certify::no_morita(d).map_err(|e| e.to_string())?;
        let l = c.value("lambda_psi_phi_d").unwrap_or_default();
        ensure(l == (d + 1).to_string(), || format!("d = {d}: lambda = {l}"))?;
        ensure(c.value("discrepancy") == Some("true"), || format!("d = {d}: discrepancy not flagged"))?;
    }
    Ok("d = -20..20, displayed-polynomial discrepancy flagged".into())
}

fn c4() -> Check {
    timed(Some(Duration::from_secs(1)), || {
        for n in 1..=50 {
            let r = brieskorn_family(n).map_err(|e| e.to_string())?;
            ensure(r.d.get() == -2 * n, || format!("n = {n}: d = {}", r.d))?;
        }
        Ok("n = 1..50".into())
    })
}

fn c5() -> Check {
    for target in [1u64, 10, 100, 1000] {
        let c = certify::cayley_diameter(2, target).map_err(|e| e.to_string())?;
        let bound: u64 = c.value("bound").and_then(|b| b.parse().ok()).unwrap_or(0);
        ensure(c.verdict && bound >= target, || format!("N = {target}: verdict {}, bound {bound}", c.verdict))?;
    }
    Ok("g = 2, N in {1, 10, 100, 1000}".into())
}

fn c6() -> Check {
    for d in (1..=20i64).flat_map(|d| [d, -d]) {
        let c = certify::no_morita(d).map_err(|e| e.to_string())?;
        let diff = c.value("defect_difference").unwrap_or_default();
        ensure(c.verdict && diff == d.to_string(), || format!("d = {d}: difference {diff}"))?;
    }
    Ok("d = +-1..+-20".into())
}

fn c7() -> Check {
    let mut last = Duration::ZERO;
    for n in 4..=12u32 {
        let start = Instant::now();
        let c = certify::not_finite_type(n, DEFAULT_MAX_N).map_err(|e| e.to_string())?;
        last = start.elapsed();
        let sum = c.value("alternating_sum").unwrap_or_default();
        ensure(c.verdict && (sum == "2" || sum == "-2"), || format!("n = {n}: sum {sum}"))?;
        ensure(c.value("nonzero_proper_terms") == Some("0"), || format!("n = {n}: nonzero proper term"))?;
    }
    ensure(last < Duration::from_secs(5), || format!("n = 12 took {last:.2?}"))?;
    Ok(format!("n = 4..12; n = 12 in {last:.2?}"))
}

fn c8() -> Check {
    let mut rng = rng_from_seed(8);
    for _ in 0..500 {
        let w = random_word(&mut rng, 5, 5);
        let p = assemble(&w, ManifoldExpr::Sphere).map_err(|e| format!("{w}: {e}"))?;
        ensure(p.homology_order().is_one(), || format!("{w}: |H_1| = {}", p.homology_order()))?;
    }
    Ok("500 words".into())
}

fn c9() -> Check {
    let mut rng = rng_from_seed(9);
    for _ in 0..500 {
        let p = random_presentation(&mut rng);
        let order = p.homology_order();
        ensure(integerize(&p).homology_order() == order, || format!("integerize: {}", p.to_json()))?;
        for c in p.components() {
            if c.curve.is_unknotted() && c.coeff.is_integer() && c.coeff.abs().is_one() {
                let r = blow_down(&p, c.id).map_err(|e| e.to_string())?;
                ensure(r.homology_order() == order, || format!("blow_down({}): {}", c.id, p.to_json()))?;
            }
        }
        let j = random_jlink(&mut rng, 3, 5, 5);
        let mut cur = j.clone();
        while let Some(pair) = cur.components().iter().find_map(|c| c.annulus_with.map(|b| (c.id, b))) {
            cur = annulus_pair_eliminate(&cur, pair).map_err(|e| e.to_string())?;
            ensure(cur.homology_order() == j.homology_order(), || format!("annulus pair: {}", j.to_json()))?;
        }
        let sphere = matches!(reduce(&j), Ok(ReduceOutcome::Manifold { result: ManifoldExpr::Sphere, .. }));
        ensure(cur.is_empty() && sphere, || format!("cable link not reduced: {}", j.to_json()))?;
    }
    Ok("500 presentations, 500 cable links".into())
}

fn c10() -> Check {
    for k in 1..=25u32 {
        for mirror in [false, true] {
            let t = KnotSpec::torus(2, 2 * i64::from(k) + 1).map_err(|e| e.to_string())?;
            let t = if mirror { t.mirrored() } else { t };
            let g = Generator::sep_realized(k, t, 0);
            let bound = generator_defect_bound(&g).map_err(|e| e.to_string())?.bound;
            for n in [-1i64, 1] {
                let w = TorelliWord::new(2 * k, vec![(g.clone(), n)]);
                let p = assemble(&w, ManifoldExpr::Sphere).map_err(|e| e.to_string())?;
                let Ok(ReduceOutcome::Manifold { result, .. }) = reduce(&p) else {
                    return Err(format!("{w} did not reduce"));
                };
                let d = d_manifold(&result).map_err(|e| e.to_string())?.get();
                let wb = word_bound(&w, std::slice::from_ref(&g)).map_err(|e| e.to_string())?;
                ensure(d.abs() <= bound && Integer::from(d.abs()) <= wb, || format!("{w}: d = {d}"))?;
            }
        }
        let t = KnotSpec::torus(2, 2 * i64::from(k) + 1).map_err(|e| e.to_string())?;
        let d = d_manifold(&ManifoldExpr::surgery(t, 1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let b = surgery_bound(1, seifert_genus(&t));
        ensure(Integer::from(d.get().abs()) == b, || format!("k = {k}: |d| = {}, bound {b}", d.get().abs()))?;
    }
    Ok("T(2,2k+1), k = 1..25, powers +-1; saturated at n = 1".into())
}

fn c11() -> Check {
    ensure(chi_hf_red(&Integer::from(1), DValue::new(-2).map_err(|e| e.to_string())?) == Integer::from(0), || {
        "chi(1, -2) != 0".into()
    })?;
    ensure(chi_hf_red(&Integer::from(0), DValue::ZERO) == Integer::from(0), || "chi(0, 0) != 0".into())?;
    let mut rng = rng_from_seed(11);
    let mut done = 0;
    while done < 10 {
        let mut pick = || {
            let k = random_knot(&mut rng, 4);
            let n = if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=3);
            ManifoldExpr::surgery(k, n)
        };
        let (Ok(a), Ok(b)) = (pick(), pick()) else { continue };
        // Pieces whose d is outside the engine are redrawn.
        let Ok(c) = certify::morita_consistency_split(&a, &b) else { continue };
        ensure(c.verdict, || format!("{a} # {b}"))?;
        done += 1;
    }
    Ok("chi(1,-2) = chi(0,0) = 0; 10 split gluings".into())
}

fn c12() -> Check {
    let mut knots = 0;
    for p in 2..=100i64 {
        for q in p + 1..=200 / p {
            let Ok(k) = KnotSpec::torus(p, q) else { continue };
            knots += 1;
            let g = seifert_genus(&k);
            let v = |m: u64| v_invariant(&k, m).map_err(|e| e.to_string());
            for m in 0..=g + 2 {
                let (a, b) = (v(m)?, v(m + 1)?);
                ensure(a >= b && b + 1 >= a, || format!("T({p},{q}): V_{m} = {a}, V_{} = {b}", m + 1))?;
                ensure(m < g || a == 0, || format!("T({p},{q}): V_{m} = {a} at m >= g"))?;
            }
        }
    }
    Ok(format!("{knots} torus knots with pq <= 200"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("Casson normalization", c1),
        ("twist-knot sweep", c2),
        ("pretzel values", c3),
        ("Brieskorn d-family", c4),
        ("Cayley-diameter certificate", c5),
        ("no-Morita certificate", c6),
        ("not-finite-type certificate", c7),
        ("homology-sphere property", c8),
        ("rewrite soundness", c9),
        ("bound engine consistency", c10),
        ("Euler characteristic bridge", c11),
        ("V-invariant properties", c12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS criterion {:>2}: {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name} ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
