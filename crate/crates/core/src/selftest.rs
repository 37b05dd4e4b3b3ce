//! Seeded random generators and the property checks behind the
//! `selftest` subcommand.

use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::knots::{seifert_genus, KnotSpec};
use crate::manifold::ManifoldExpr;
use crate::surgery::{
    annulus_pair_eliminate, blow_down, build_jlink, integerize, rational, reduce, CurveSpec,
    ReduceOutcome, SurgeryPresentation,
};
use crate::torelli::{assemble, conjugate_invariance_check, Generator, TorelliWord};
use crate::Integer;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nonzero(rng: &mut impl Rng, bound: i64) -> i64 {
    let v = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

/// A catalog knot of Seifert genus at most `max_genus`.
pub fn random_knot(rng: &mut impl Rng, max_genus: u32) -> KnotSpec {
    let k = match rng.gen_range(0..5) {
        0 => KnotSpec::unknot(),
        1 => {
            let j = rng.gen_range(1..=max_genus.clamp(1, 6)) as i64;
            KnotSpec::torus(2, 2 * j + 1).expect("coprime")
        }
        2 => KnotSpec::double_twist(nonzero(rng, 4), nonzero(rng, 4)).expect("nonzero parameters"),
        3 => KnotSpec::whitehead_iterate(rng.gen_range(1..=3)),
        _ => {
            let odd = |rng: &mut dyn rand::RngCore| 2 * rng.gen_range(-3i64..=3) + 1;
            KnotSpec::pretzel(odd(rng), odd(rng), odd(rng)).expect("odd parameters")
        }
    };
    let k = if rng.gen_bool(0.5) { k.mirrored() } else { k };
    if seifert_genus(&k) > u64::from(max_genus) {
        KnotSpec::unknot()
    } else {
        k
    }
}

fn random_surface_curve(rng: &mut impl Rng) -> CurveSpec {
    match rng.gen_range(0..3) {
        0 => CurveSpec::UnlinkComponent,
        1 => CurveSpec::Knot(random_knot(rng, 3)),
        _ => CurveSpec::CableStrand {
            companion: random_knot(rng, 2),
            twist: rng.gen_range(-3..=3),
            strand: rng.gen_range(1..=2),
        },
    }
}

/// A realized word with up to `max_letters` letters, powers in
/// `[-max_power, max_power] \ {0}`, mixed separating and bounding-pair
/// letters, and random cross-linking between bounding pairs.
pub fn random_word(rng: &mut impl Rng, max_letters: usize, max_power: i64) -> TorelliWord {
    let genus = rng.gen_range(2..=6u32);
    let count = rng.gen_range(0..=max_letters);
    let mut w = TorelliWord::empty(genus);
    for _ in 0..count {
        let m = rng.gen_range(1..=genus / 2);
        let g = if rng.gen_bool(0.5) {
            Generator::sep_realized(m, random_knot(rng, m), 0)
        } else {
            let s = rng.gen_range(-5..=5);
            Generator::bp_realized(m, (random_surface_curve(rng), random_surface_curve(rng)), s, s)
        };
        w.letters.push((g, nonzero(rng, max_power)));
    }
    let bps: Vec<usize> = (0..w.letters.len())
        .filter(|&i| matches!(w.letters[i].0, Generator::BPMap { .. }))
        .collect();
    for (a, &i) in bps.iter().enumerate() {
        for &j in &bps[a + 1..] {
            w = w.with_eta(i, j, rng.gen_range(-3..=3));
        }
    }
    w
}

/// Random presentation with rational coefficients, some `±1` unknots and
/// arbitrary linking.
pub fn random_presentation(rng: &mut impl Rng) -> SurgeryPresentation {
    let mut p = SurgeryPresentation::empty();
    let count = rng.gen_range(1..=5);
    for _ in 0..count {
        let (curve, coeff) = if rng.gen_bool(0.4) {
            let c = if rng.gen_bool(0.5) { CurveSpec::UnlinkComponent } else { CurveSpec::Knot(KnotSpec::unknot()) };
            (c, rational(if rng.gen_bool(0.5) { 1 } else { -1 }, 1))
        } else {
            (CurveSpec::Knot(random_knot(rng, 3)), rational(rng.gen_range(-9..=9), rng.gen_range(1..=6)))
        };
        p.add(curve, coeff);
    }
    let ids = p.ids();
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            p.set_linking(a, b, Integer::from(rng.gen_range(-3..=3)));
        }
    }
    p
}

/// Cable-with-earrings link with `k <= max_k` blocks.
pub fn random_jlink(rng: &mut impl Rng, max_k: usize, max_ell: i64, max_n: i64) -> SurgeryPresentation {
    let k = rng.gen_range(0..=max_k);
    let mut etas = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in 0..i {
            let v = rng.gen_range(-4..=4);
            etas[i][j] = v;
            etas[j][i] = v;
        }
    }
    let ells: Vec<i64> = (0..k).map(|_| rng.gen_range(-max_ell..=max_ell)).collect();
    let ns: Vec<i64> = (0..k).map(|_| rng.gen_range(-max_n..=max_n)).collect();
    build_jlink(&etas, &ells, &ns).expect("dimensions agree")
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub cases: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Assembled words are homology spheres.
pub fn check_words(rng: &mut impl Rng, cases: usize, report: &mut SelftestReport) {
    for _ in 0..cases {
        let w = random_word(rng, 5, 5);
        match assemble(&w, ManifoldExpr::Sphere) {
            Ok(p) => {
                let order = p.homology_order();
                report.check(order.is_one(), || format!("|H_1| = {order} for {w}"));
            }
            Err(e) => report.check(false, || format!("{w}: {e}")),
        }
        report.check(conjugate_invariance_check(&w).invariant, || format!("conjugation changed {w}"));
    }
}

/// `|H_1|` survives integerize, blow-downs and annulus-pair elimination.
pub fn check_moves(rng: &mut impl Rng, cases: usize, report: &mut SelftestReport) {
    for _ in 0..cases {
        let p = random_presentation(rng);
        let order = p.homology_order();
        let q = integerize(&p);
        report.check(q.homology_order() == order, || format!("integerize changed |H_1| of {}", p.to_json()));
        for c in p.components() {
            if c.curve.is_unknotted() && c.coeff.abs().is_one() && c.coeff.is_integer() {
                match blow_down(&p, c.id) {
                    Ok(r) => report.check(
                        r.homology_order() == order && r.linking_matrix().is_symmetric(),
                        || format!("blow_down({}) changed |H_1| of {}", c.id, p.to_json()),
                    ),
                    Err(e) => report.check(false, || format!("blow_down({}) failed: {e}", c.id)),
                }
            }
        }
        let j = random_jlink(rng, 3, 5, 5);
        let mut cur = j.clone();
        let order = j.homology_order();
        while let Some(pair) = cur.components().iter().find_map(|c| c.annulus_with.map(|b| (c.id, b))) {
            match annulus_pair_eliminate(&cur, pair) {
                Ok(next) => {
                    report.check(next.homology_order() == order, || format!("annulus elimination changed |H_1| of {}", j.to_json()));
                    cur = next;
                }
                Err(e) => {
                    report.check(false, || format!("annulus elimination failed: {e}"));
                    break;
                }
            }
        }
        report.check(cur.is_empty(), || format!("cable link did not empty out: {}", j.to_json()));
    }
}

/// Cable-with-earrings links reduce to `S^3`.
pub fn check_jlinks(rng: &mut impl Rng, cases: usize, report: &mut SelftestReport) {
    for _ in 0..cases {
        let j = random_jlink(rng, 3, 5, 5);
        let ok = matches!(reduce(&j), Ok(ReduceOutcome::Manifold { result: ManifoldExpr::Sphere, .. }));
        report.check(ok, || format!("cable link did not reduce to S3: {}", j.to_json()));
    }
}

pub fn run(seed: u64, cases: usize) -> SelftestReport {
    let mut rng = rng_from_seed(seed);
    let mut report = SelftestReport { seed, cases, ..Default::default() };
    check_words(&mut rng, cases, &mut report);
    check_moves(&mut rng, cases, &mut report);
    check_jlinks(&mut rng, cases, &mut report);
    report
}

/// Shuffles letters whose realizations have disjoint support.
pub fn shuffle_letters(rng: &mut impl Rng, w: &TorelliWord) -> (TorelliWord, Vec<usize>) {
    let mut order: Vec<usize> = (0..w.letters.len()).collect();
    order.shuffle(rng);
    let letters = order.iter().map(|&i| w.letters[i].clone()).collect();
    (TorelliWord::new(w.genus, letters), order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_runs_pass_and_repeat() {
        let a = run(7, 60);
        assert!(a.passed(), "{:?}", a.failures);
        assert_eq!(a, run(7, 60));
    }

    #[test]
    fn random_knots_respect_genus() {
        let mut rng = rng_from_seed(3);
        for _ in 0..300 {
            let g = rng.gen_range(1..=4);
            assert!(seifert_genus(&random_knot(&mut rng, g)) <= u64::from(g));
        }
    }
}
