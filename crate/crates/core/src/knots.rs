//! Symbolic knot catalog.
//!
//! Knots are named by family and parameters, never by diagrams. Each family
//! carries an exact Alexander polynomial, a Seifert genus and, where one is
//! known, the sequence of `V_m` invariants that drive the d-invariant engine.
//!
//! `V_m` sources:
//! - positive torus knots: `V_m` counts the gaps of the semigroup `<p, q>`
//!   that are at least `g + m`;
//! - iterated positive Whitehead doubles `Wh^k(T(2,3))`: `tau = 1` and slice
//!   genus 1 squeeze `V_0` into `{1}` (`0 <= V_0 <= ceil(g_4 / 2)` and
//!   `V_0 > 0` whenever `tau > 0`), and `V_m = 0` for `m >= g_4 = 1`;
//! - mirrors of either family have all `V_m = 0`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::LaurentPoly;
use crate::matrix::SquareMatrix;
use crate::scalar::Exact;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KnotError {
    #[error("torus parameters ({0}, {1}) are not coprime")]
    NotCoprime(i64, i64),
    #[error("invalid knot parameters: {0}")]
    InvalidParameters(String),
    #[error("no V_m rule for {0}")]
    UnsupportedKnot(String),
    #[error("cannot parse knot {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KnotFamily {
    Unknot,
    /// Positive `(p, q)` torus knot, `2 <= p < q`, coprime.
    Torus { p: i64, q: i64 },
    /// Genus-one knot with Seifert matrix `[[a, 1], [0, b]]`.
    GenusOneDoubleTwist { a: i64, b: i64 },
    /// Pretzel knot with three odd twist parameters.
    Pretzel { p: i64, q: i64, r: i64 },
    /// `Wh^k(T(2,3))`, positive clasps.
    WhiteheadIterate(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KnotSpec {
    pub family: KnotFamily,
    pub mirror: bool,
}

impl KnotSpec {
    pub fn unknot() -> Self {
        Self { family: KnotFamily::Unknot, mirror: false }
    }

    pub fn torus(p: i64, q: i64) -> Result<Self, KnotError> {
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        if p < 2 {
            return Err(KnotError::InvalidParameters(format!(
                "torus parameters must be at least 2, got ({p}, {q})"
            )));
        }
        if p.gcd(&q) != 1 {
            return Err(KnotError::NotCoprime(p, q));
        }
        Ok(Self { family: KnotFamily::Torus { p, q }, mirror: false })
    }

    pub fn double_twist(a: i64, b: i64) -> Result<Self, KnotError> {
        if a == 0 || b == 0 {
            return Err(KnotError::InvalidParameters(format!(
                "double-twist parameters must be nonzero, got ({a}, {b})"
            )));
        }
        Ok(Self { family: KnotFamily::GenusOneDoubleTwist { a, b }, mirror: false })
    }

    /// The family `K_n` with `Δ = n t - (2n - 1) + n t^{-1}`.
    pub fn twist_family(n: i64) -> Result<Self, KnotError> {
        Self::double_twist(1, n)
    }

    pub fn pretzel(p: i64, q: i64, r: i64) -> Result<Self, KnotError> {
        if [p, q, r].iter().any(|x| x % 2 == 0) {
            return Err(KnotError::InvalidParameters(format!(
                "pretzel parameters must all be odd, got ({p}, {q}, {r})"
            )));
        }
        Ok(Self { family: KnotFamily::Pretzel { p, q, r }, mirror: false })
    }

    pub fn whitehead_iterate(k: u32) -> Self {
        Self { family: KnotFamily::WhiteheadIterate(k), mirror: false }
    }

    pub fn mirrored(self) -> Self {
        Self { mirror: !self.mirror, ..self }
    }

    /// Identifies catalog aliases: `P(1,1,1)` is `T(2,3)`, `P(1,-1,r)` and
    /// its permutations are unknotted, and a mirrored unknot is the unknot.
    pub fn canonical(self) -> Self {
        let base = match self.family {
            KnotFamily::Pretzel { p, q, r } => {
                let params = [p, q, r];
                if params.contains(&1) && params.contains(&-1) {
                    Some(Self::unknot())
                } else if params == [1, 1, 1] {
                    Some(Self { family: KnotFamily::Torus { p: 2, q: 3 }, mirror: false })
                } else if params == [-1, -1, -1] {
                    Some(Self { family: KnotFamily::Torus { p: 2, q: 3 }, mirror: true })
                } else {
                    None
                }
            }
            KnotFamily::WhiteheadIterate(0) => {
                Some(Self { family: KnotFamily::Torus { p: 2, q: 3 }, mirror: false })
            }
            _ => None,
        };
        let out = match base {
            Some(b) if self.mirror => b.mirrored(),
            Some(b) => b,
            None => self,
        };
        if out.family == KnotFamily::Unknot {
            Self::unknot()
        } else {
            out
        }
    }
}

impl fmt::Display for KnotSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mirror {
            write!(f, "m")?;
        }
        match self.family {
            KnotFamily::Unknot => write!(f, "U"),
            KnotFamily::Torus { p, q } => write!(f, "T({p},{q})"),
            KnotFamily::GenusOneDoubleTwist { a, b } => write!(f, "D({a},{b})"),
            KnotFamily::Pretzel { p, q, r } => write!(f, "P({p},{q},{r})"),
            KnotFamily::WhiteheadIterate(k) => write!(f, "Wh^{k}"),
        }
    }
}

impl FromStr for KnotSpec {
    type Err = KnotError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| KnotError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let (mirror, body) = match s.strip_prefix('m') {
            Some(rest) => (true, rest),
            None => (false, s.as_str()),
        };
        let args = |prefix: &str, count: usize| -> Result<Vec<i64>, KnotError> {
            let inner = body
                .strip_prefix(prefix)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| err("expected parenthesised arguments"))?;
            let vals = inner
                .split(',')
                .map(|a| a.parse::<i64>().map_err(|_| err(&format!("bad integer {a:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if vals.len() != count {
                return Err(err(&format!("expected {count} arguments, got {}", vals.len())));
            }
            Ok(vals)
        };
        let knot = if body == "U" {
            Self::unknot()
        } else if body.starts_with("T(") {
            let v = args("T", 2)?;
            Self::torus(v[0], v[1])?
        } else if body.starts_with("D(") {
            let v = args("D", 2)?;
            Self::double_twist(v[0], v[1])?
        } else if body.starts_with("P(") {
            let v = args("P", 3)?;
            Self::pretzel(v[0], v[1], v[2])?
        } else if let Some(k) = body.strip_prefix("Wh^") {
            let k = k.trim_start_matches(['(', '{']).trim_end_matches([')', '}']);
            Self::whitehead_iterate(k.parse().map_err(|_| err(&format!("bad iterate count {k:?}")))?)
        } else {
            return Err(err("unknown knot family"));
        };
        Ok(if mirror { knot.mirrored() } else { knot })
    }
}

impl Serialize for KnotSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for KnotSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Gaps of the numerical semigroup `<p, q>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemigroupData {
    pub generators: (i64, i64),
    pub gaps: Vec<i64>,
}

impl SemigroupData {
    pub fn frobenius(&self) -> Option<i64> {
        self.gaps.last().copied()
    }
}

pub fn semigroup(p: i64, q: i64) -> Result<SemigroupData, KnotError> {
    if p < 2 || q < 2 {
        return Err(KnotError::InvalidParameters(format!(
            "semigroup generators must be at least 2, got ({p}, {q})"
        )));
    }
    if p.gcd(&q) != 1 {
        return Err(KnotError::NotCoprime(p, q));
    }
    let frobenius = p * q - p - q;
    let mut member = vec![false; (frobenius + 1) as usize];
    member[0] = true;
    for x in 1..=frobenius {
        let xi = x as usize;
        member[xi] = (x >= p && member[xi - p as usize]) || (x >= q && member[xi - q as usize]);
    }
    let gaps = (1..=frobenius).filter(|&x| !member[x as usize]).collect();
    Ok(SemigroupData { generators: (p, q), gaps })
}

/// Seifert matrix for the genus-one families.
pub fn seifert_matrix<T: Exact>(k: &KnotSpec) -> Option<SquareMatrix<T>> {
    let rows = match k.family {
        KnotFamily::GenusOneDoubleTwist { a, b } => vec![vec![a, 1], vec![0, b]],
        KnotFamily::Pretzel { p, q, r } => {
            vec![vec![(p + q) / 2, (q + 1) / 2], vec![(q - 1) / 2, (q + r) / 2]]
        }
        _ => return None,
    };
    let rows = rows
        .into_iter()
        .map(|r| r.into_iter().map(T::from_int).collect())
        .collect();
    Some(SquareMatrix::from_rows(rows))
}

/// `det(V - t V^T)` for a 2x2 Seifert matrix, before normalization.
fn seifert_determinant<T: Exact>(v: &SquareMatrix<T>) -> LaurentPoly<T> {
    assert_eq!(v.dim(), 2, "only genus-one Seifert matrices are supported");
    let entry = |i: usize, j: usize| {
        &LaurentPoly::constant(v.get(i, j).clone()) - &LaurentPoly::monomial(v.get(j, i).clone(), 1)
    };
    &(&entry(0, 0) * &entry(1, 1)) - &(&entry(0, 1) * &entry(1, 0))
}

fn torus_alexander<T: Exact>(p: i64, q: i64) -> LaurentPoly<T> {
    let binomial = |n: i64| {
        LaurentPoly::from_terms([(n, T::one()), (0, -T::one())])
    };
    let num = &binomial(p * q) * &binomial(1);
    let den = &binomial(p) * &binomial(q);
    num.div_exact(&den)
        .expect("torus knot quotient is a polynomial")
        .symmetrize_normalize()
        .expect("torus knot polynomial is normalizable")
}

/// Symmetric Alexander polynomial normalized to value 1 at `t = 1`.
pub fn alexander<T: Exact>(k: &KnotSpec) -> LaurentPoly<T> {
    match k.canonical().family {
        KnotFamily::Unknot => LaurentPoly::constant(T::one()),
        KnotFamily::Torus { p, q } => torus_alexander(p, q),
        KnotFamily::WhiteheadIterate(_) => LaurentPoly::constant(T::one()),
        family @ (KnotFamily::GenusOneDoubleTwist { .. } | KnotFamily::Pretzel { .. }) => {
            let v = seifert_matrix::<T>(&KnotSpec { family, mirror: false })
                .expect("genus-one family has a Seifert matrix");
            seifert_determinant(&v)
                .symmetrize_normalize()
                .expect("Seifert determinant is normalizable")
        }
    }
}

pub fn seifert_genus(k: &KnotSpec) -> u64 {
    match k.canonical().family {
        KnotFamily::Unknot => 0,
        KnotFamily::Torus { p, q } => ((p - 1) * (q - 1) / 2) as u64,
        KnotFamily::GenusOneDoubleTwist { .. }
        | KnotFamily::Pretzel { .. }
        | KnotFamily::WhiteheadIterate(_) => 1,
    }
}

/// The invariant `V_m(K)`.
pub fn v_invariant(k: &KnotSpec, m: u64) -> Result<u64, KnotError> {
    let c = k.canonical();
    match (c.family, c.mirror) {
        (KnotFamily::Unknot, _) => Ok(0),
        (KnotFamily::Torus { .. } | KnotFamily::WhiteheadIterate(_), true) => Ok(0),
        (KnotFamily::Torus { p, q }, false) => {
            let g = seifert_genus(&c) as i64;
            let sg = semigroup(p, q)?;
            Ok(sg.gaps.iter().filter(|&&x| x >= g + m as i64).count() as u64)
        }
        (KnotFamily::WhiteheadIterate(_), false) => Ok(if m == 0 { 1 } else { 0 }),
        _ => Err(KnotError::UnsupportedKnot(k.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = LaurentPoly<BigInt>;

    fn p(low: i64, c: &[i64]) -> P {
        P::from_coeffs(low, c)
    }

    /// Brute-force semigroup membership by enumerating a p + b q.
    fn gaps_oracle(p: i64, q: i64) -> Vec<i64> {
        let bound = p * q;
        (1..bound)
            .filter(|&x| !(0..=x / p).any(|a| (x - a * p) % q == 0))
            .collect()
    }

    /// `Δ_{T(p,q)} = 1 + (t - 1) Σ_{gaps} t^j`, centred.
    fn torus_oracle(p: i64, q: i64) -> P {
        let mut sum = P::zero();
        for j in gaps_oracle(p, q) {
            sum = &sum + &P::monomial(1.into(), j);
        }
        let raw = &P::constant(1.into()) + &(&p_t_minus_one() * &sum);
        let g = (p - 1) * (q - 1) / 2;
        raw.shift(-g)
    }

    fn p_t_minus_one() -> P {
        p(0, &[-1, 1])
    }

    #[test]
    fn semigroup_examples() {
        assert_eq!(semigroup(2, 3).unwrap().gaps, vec![1]);
        assert_eq!(semigroup(2, 5).unwrap().gaps, vec![1, 3]);
        assert_eq!(semigroup(3, 4).unwrap().gaps, vec![1, 2, 5]);
        assert_eq!(semigroup(4, 6), Err(KnotError::NotCoprime(4, 6)));
        assert!(semigroup(1, 5).is_err());
    }

    #[test]
    fn semigroup_matches_oracle_and_genus() {
        for p in 2..15i64 {
            for q in p + 1..40 {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let sg = semigroup(p, q).unwrap();
                assert_eq!(sg.gaps, gaps_oracle(p, q));
                let k = KnotSpec::torus(p, q).unwrap();
                assert_eq!(sg.gaps.len() as u64, seifert_genus(&k));
                assert_eq!(sg.frobenius(), Some(p * q - p - q));
            }
        }
    }

    #[test]
    fn torus_alexander_matches_gap_oracle() {
        assert_eq!(alexander::<BigInt>(&KnotSpec::torus(2, 3).unwrap()), p(-1, &[1, -1, 1]));
        for p_ in 2..8i64 {
            for q in p_ + 1..20 {
                if p_.gcd(&q) == 1 {
                    let k = KnotSpec::torus(p_, q).unwrap();
                    assert_eq!(alexander::<BigInt>(&k), torus_oracle(p_, q), "T({p_},{q})");
                }
            }
        }
    }

    #[test]
    fn genus_one_alexander_examples() {
        for n in 1..30 {
            let k = KnotSpec::twist_family(n).unwrap();
            assert_eq!(alexander::<BigInt>(&k), p(-1, &[n, -(2 * n - 1), n]));
        }
        assert_eq!(alexander::<BigInt>(&KnotSpec::unknot()), p(0, &[1]));
        assert_eq!(alexander::<BigInt>(&KnotSpec::pretzel(1, 1, 3).unwrap()), p(-1, &[2, -3, 2]));
    }

    /// Evaluates `det(V - t V^T)` at integer points with the closed-form 2x2
    /// determinant. The raw determinant equals `(v01 - v10)^2 = 1` at
    /// `t = 1`, so it must agree with `t * Δ(t)` pointwise.
    #[test]
    fn pretzel_alexander_matches_pointwise_seifert_oracle() {
        for a in [-7i64, -5, -3, -1, 1, 3, 5, 7] {
            for b in [-5i64, -3, -1, 1, 3, 5] {
                for c in [-9i64, -3, 1, 3, 9] {
                    let k = KnotSpec::pretzel(a, b, c).unwrap();
                    let v = [[(a + b) / 2, (b + 1) / 2], [(b - 1) / 2, (b + c) / 2]];
                    let delta = alexander::<BigInt>(&k);
                    assert!(delta.min_degree().unwrap() >= -1 && delta.max_degree().unwrap() <= 1);
                    for t in -4..6i64 {
                        let e = |i: usize, j: usize| v[i][j] - t * v[j][i];
                        let det = e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
                        let val: BigInt = (-1..=1)
                            .map(|exp| delta.coeff(exp) * BigInt::from(t).pow((exp + 1) as u32))
                            .sum();
                        assert_eq!(BigInt::from(det), val, "P({a},{b},{c}) at t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn pretzel_family_reduces_to_double_twist() {
        for d in -20i64..=20 {
            let pk = KnotSpec::pretzel(1, 1, 1 + 2 * d).unwrap();
            let dk = KnotSpec::double_twist(1, d + 1);
            if d == -1 {
                assert!(dk.is_err());
                assert_eq!(alexander::<BigInt>(&pk), p(0, &[1]));
                continue;
            }
            assert_eq!(alexander::<BigInt>(&pk), alexander::<BigInt>(&dk.unwrap()), "d = {d}");
            assert_eq!(alexander::<BigInt>(&pk), p(-1, &[d + 1, -(2 * d + 1), d + 1]));
        }
    }

    #[test]
    fn trefoil_aliases_agree() {
        let t23 = alexander::<BigInt>(&KnotSpec::torus(2, 3).unwrap());
        assert_eq!(alexander::<BigInt>(&KnotSpec::pretzel(1, 1, 1).unwrap()), t23);
        assert_eq!(alexander::<BigInt>(&KnotSpec::double_twist(1, 1).unwrap()), t23);
    }

    #[test]
    fn mirror_preserves_alexander() {
        for s in ["T(2,3)", "T(3,7)", "D(2,-3)", "P(1,3,-5)", "Wh^2", "U"] {
            let k: KnotSpec = s.parse().unwrap();
            assert_eq!(alexander::<BigInt>(&k), alexander::<BigInt>(&k.mirrored()));
        }
    }

    #[test]
    fn genus_examples() {
        assert_eq!(seifert_genus(&KnotSpec::torus(2, 7).unwrap()), 3);
        assert_eq!(seifert_genus(&KnotSpec::unknot()), 0);
        assert_eq!(seifert_genus(&KnotSpec::whitehead_iterate(4)), 1);
        assert_eq!(seifert_genus(&KnotSpec::pretzel(1, -1, 5).unwrap()), 0);
    }

    #[test]
    fn v_invariant_examples() {
        assert_eq!(v_invariant(&KnotSpec::torus(2, 9).unwrap(), 0), Ok(2));
        assert_eq!(v_invariant(&KnotSpec::unknot(), 0), Ok(0));
        assert_eq!(v_invariant(&KnotSpec::torus(2, 3).unwrap(), 1), Ok(0));
        assert_eq!(v_invariant(&KnotSpec::torus(2, 3).unwrap().mirrored(), 0), Ok(0));
        assert_eq!(v_invariant(&KnotSpec::whitehead_iterate(3), 0), Ok(1));
        assert_eq!(v_invariant(&KnotSpec::whitehead_iterate(3), 1), Ok(0));
        assert_eq!(v_invariant(&KnotSpec::whitehead_iterate(3).mirrored(), 0), Ok(0));
        assert_eq!(v_invariant(&KnotSpec::pretzel(1, 1, 1).unwrap(), 0), Ok(1));
        assert!(matches!(
            v_invariant(&KnotSpec::double_twist(1, 4).unwrap(), 0),
            Err(KnotError::UnsupportedKnot(_))
        ));
    }

    #[test]
    fn brieskorn_v0_sweep() {
        for n in 1..=50i64 {
            let k = KnotSpec::torus(2, 4 * n + 1).unwrap();
            assert_eq!(v_invariant(&k, 0).unwrap(), n as u64);
        }
    }

    #[test]
    fn v_sequence_properties_for_small_torus_knots() {
        for p_ in 2..=14i64 {
            for q in p_ + 1..=200 / p_ {
                if p_.gcd(&q) != 1 {
                    continue;
                }
                let k = KnotSpec::torus(p_, q).unwrap();
                let g = seifert_genus(&k);
                let vs: Vec<u64> = (0..=g + 2).map(|m| v_invariant(&k, m).unwrap()).collect();
                for w in vs.windows(2) {
                    assert!(w[0] >= w[1] && w[0] - w[1] <= 1, "T({p_},{q}): {vs:?}");
                }
                assert!(vs[g as usize..].iter().all(|&v| v == 0));
            }
        }
    }

    #[test]
    fn knot_grammar_round_trip() {
        for s in ["U", "T(2,3)", "mT(2,9)", "D(1,-4)", "P(1,1,-7)", "Wh^3", "mWh^0"] {
            let k: KnotSpec = s.parse().unwrap();
            assert_eq!(k.to_string(), s);
        }
        assert_eq!("T(3,2)".parse::<KnotSpec>().unwrap().to_string(), "T(2,3)");
        assert!("T(2,4)".parse::<KnotSpec>().is_err());
        assert!("P(1,2,3)".parse::<KnotSpec>().is_err());
        assert!("D(0,1)".parse::<KnotSpec>().is_err());
        assert!("Q(1)".parse::<KnotSpec>().is_err());
        assert!("T(2,3,5)".parse::<KnotSpec>().is_err());
    }
}
