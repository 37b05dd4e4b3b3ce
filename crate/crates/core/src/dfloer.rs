//! Heegaard Floer correction terms of `±1/n` surgeries.
//!
//! Rules, for `n >= 1`:
//!
//! ```text
//! d(S^3_{+1/n}(K)) = -2 V_0(K)
//! d(S^3_{-1/n}(K)) = +2 V_0(mirror K)
//! ```
//!
//! `d` is additive under connected sum and negates under orientation
//! reversal.

use std::fmt;
use std::ops::{Add, Neg};

use serde::Serialize;
use thiserror::Error;

use crate::knots::{v_invariant, KnotError, KnotSpec};
use crate::manifold::ManifoldExpr;
use crate::Integer;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DError {
    #[error("d-invariants of homology spheres are even, got {0}")]
    OddValue(i64),
    #[error("surgery denominator must be positive, got {0}")]
    NonPositiveDenominator(i64),
    #[error(transparent)]
    UnsupportedKnot(#[from] KnotError),
    #[error("d(+1 surgery on T(2,{q})) = {computed} but the Brieskorn family requires {expected}")]
    MismatchWithGapOracle { q: i64, computed: i64, expected: i64 },
}

/// An even integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DValue(i64);

impl DValue {
    pub const ZERO: DValue = DValue(0);

    pub fn new(v: i64) -> Result<Self, DError> {
        if v % 2 != 0 {
            return Err(DError::OddValue(v));
        }
        Ok(Self(v))
    }

    pub fn get(self) -> i64 {
        self.0
    }

    pub fn half(self) -> i64 {
        self.0 / 2
    }
}

impl Add for DValue {
    type Output = DValue;
    fn add(self, rhs: DValue) -> DValue {
        DValue(self.0 + rhs.0)
    }
}

impl Neg for DValue {
    type Output = DValue;
    fn neg(self) -> DValue {
        DValue(-self.0)
    }
}

impl fmt::Display for DValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(n: i64) -> Sign {
        if n < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// `d(S^3_{±1/n}(k))` for `n >= 1`.
pub fn d_surgery(k: &KnotSpec, sign: Sign, n: i64) -> Result<DValue, DError> {
    if n < 1 {
        return Err(DError::NonPositiveDenominator(n));
    }
    let v0 = match sign {
        Sign::Plus => -(v_invariant(k, 0)? as i64),
        Sign::Minus => v_invariant(&k.mirrored(), 0)? as i64,
    };
    DValue::new(2 * v0)
}

pub fn d_manifold(e: &ManifoldExpr) -> Result<DValue, DError> {
    let mut total = DValue::ZERO;
    e.for_each_piece(&mut |k, n, orientation| -> Result<(), DError> {
        let d = d_surgery(k, Sign::of(n), n.abs())?;
        total = total + if orientation < 0 { -d } else { d };
        Ok(())
    })?;
    Ok(total)
}

/// `χ(HF_red(Y)) = λ(Y) + d(Y)/2`.
pub fn chi_hf_red(lambda: &Integer, d: DValue) -> Integer {
    lambda + d.half()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BrieskornRecord {
    pub n: i64,
    pub knot: KnotSpec,
    pub coefficient: i64,
    pub d: DValue,
}

/// `Σ(2, 4n+1, 8n+1)` as `+1` surgery on `T(2, 4n+1)`, with `d = -2n`
/// recomputed from the semigroup of `<2, 4n+1>`.
pub fn brieskorn_family(n: i64) -> Result<BrieskornRecord, DError> {
    if n < 1 {
        return Err(DError::NonPositiveDenominator(n));
    }
    let q = 4 * n + 1;
    let knot = KnotSpec::torus(2, q)?;
    let computed = d_surgery(&knot, Sign::Plus, 1)?;
    let expected = DValue::new(-2 * n)?;
    if computed != expected {
        return Err(DError::MismatchWithGapOracle {
            q,
            computed: computed.get(),
            expected: expected.get(),
        });
    }
    Ok(BrieskornRecord { n, knot, coefficient: 1, d: computed })
}
