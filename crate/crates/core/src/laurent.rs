//! Integer Laurent polynomials in one variable `t`.
//!
//! Coefficients live in a sparse exponent map with no stored zeros, so two
//! equal polynomials always have equal representations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

use crate::scalar::Exact;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("polynomial {0} has no unit multiple that is symmetric with value 1 at t = 1")]
    NotNormalizable(String),
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<T> {
    coeffs: BTreeMap<i64, T>,
}

impl<T: Exact> LaurentPoly<T> {
    pub fn zero() -> Self {
        Self { coeffs: BTreeMap::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: T, exp: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(T::one(), 1)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, T)>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Builds `Σ coeffs[i] t^(low + i)`.
    pub fn from_coeffs(low: i64, coeffs: &[i64]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (low + i as i64, T::from_int(c))),
        )
    }

    fn add_term(&mut self, exp: i64, c: T) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&exp) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(exp, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> T {
        self.coeffs.get(&exp).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &T)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(e, c)| (*e, c.clone() * s.clone())))
    }

    /// Substitutes `t -> t^{-1}`.
    pub fn invert_variable(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn eval_at_one(&self) -> T {
        self.coeffs.values().fold(T::zero(), |acc, c| acc + c.clone())
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.invert_variable()
    }

    /// Exact division. Returns `None` when `divisor` does not divide `self`
    /// in `Z[t, t^{-1}]`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let d_hi = divisor.max_degree()?;
        let d_lo = divisor.min_degree()?;
        let lead = divisor.coeff(d_hi);
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(r_hi) = rem.max_degree() {
            if r_hi - d_hi < rem.min_degree()? - d_lo {
                return None;
            }
            let c = rem.coeff(r_hi);
            let (q, r) = c.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            let term = Self::monomial(q, r_hi - d_hi);
            rem = &rem - &(&term * divisor);
            quot = &quot + &term;
        }
        Some(quot)
    }

    /// Multiplies by the unit `±t^k` that makes the polynomial symmetric
    /// under `t <-> t^{-1}` with value 1 at `t = 1`.
    pub fn symmetrize_normalize(&self) -> Result<Self, LaurentError> {
        let fail = || LaurentError::NotNormalizable(self.to_string());
        let (lo, hi) = match (self.min_degree(), self.max_degree()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Err(fail()),
        };
        // Symmetric polynomials have even span, centred at 0.
        if (lo + hi) % 2 != 0 {
            return Err(fail());
        }
        let centred = self.shift(-(lo + hi) / 2);
        let value = centred.eval_at_one();
        let unit = if value.is_one() {
            centred
        } else if (-value).is_one() {
            -&centred
        } else {
            return Err(fail());
        };
        if unit.is_symmetric() {
            Ok(unit)
        } else {
            Err(fail())
        }
    }

    /// `Σ j(j-1) a_j`, the second formal derivative evaluated at `t = 1`.
    pub fn second_derivative_at_one(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, (e, c)| {
            acc + T::from_int(e * (e - 1)) * c.clone()
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(T::one()), |acc, _| &acc * self)
    }
}

impl<T: Exact> Default for LaurentPoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Exact> Add for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;

    fn add(self, rhs: Self) -> LaurentPoly<T> {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<T: Exact> Sub for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;

    fn sub(self, rhs: Self) -> LaurentPoly<T> {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<T: Exact> Mul for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;

    fn mul(self, rhs: Self) -> LaurentPoly<T> {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                out.add_term(ea + eb, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<T: Exact> Neg for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;

    fn neg(self) -> LaurentPoly<T> {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl<T: Exact> Add for LaurentPoly<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Exact> Sub for LaurentPoly<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Exact> Mul for LaurentPoly<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<T: Exact> Neg for LaurentPoly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        -&self
    }
}

/// Renders as `2*t - 3 + 2*t^-1`: exponents descending, unit coefficients
/// elided, `0` for the zero polynomial.
impl<T: Exact> fmt::Display for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let var = match *e {
                0 => String::new(),
                1 => "t".to_string(),
                k => format!("t^{k}"),
            };
            if var.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}*{var}")?;
            }
        }
        Ok(())
    }
}

impl<T: Exact> fmt::Debug for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl<T: Exact + FromStr> FromStr for LaurentPoly<T> {
    type Err = LaurentError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| LaurentError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty input"));
        }
        // Split into signed terms; a sign directly after '^' belongs to the exponent.
        let mut terms = Vec::new();
        let mut current = String::new();
        let mut prev: Option<char> = None;
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && !matches!(prev, None | Some('^') | Some('(') | Some('{')) {
                terms.push(std::mem::take(&mut current));
            }
            current.push(ch);
            prev = Some(ch);
        }
        terms.push(current);

        let mut poly = Self::zero();
        for raw in terms {
            let (negative, body) = match raw.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, raw.strip_prefix('+').unwrap_or(&raw)),
            };
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let (coeff_str, var_str) = match body.find('t') {
                Some(pos) => (&body[..pos], Some(&body[pos + 1..])),
                None => (body, None),
            };
            let coeff_str = coeff_str.strip_suffix('*').unwrap_or(coeff_str);
            let mut coeff = if coeff_str.is_empty() {
                if var_str.is_none() {
                    return Err(err("empty term"));
                }
                T::one()
            } else {
                coeff_str
                    .parse::<T>()
                    .map_err(|_| err(&format!("bad coefficient {coeff_str:?}")))?
            };
            let exp = match var_str {
                None => 0,
                Some("") => 1,
                Some(rest) => {
                    let e = rest.strip_prefix('^').ok_or_else(|| err("expected '^' after t"))?;
                    let e = e.trim_start_matches(['(', '{']).trim_end_matches([')', '}']);
                    e.parse::<i64>().map_err(|_| err(&format!("bad exponent {e:?}")))?
                }
            };
            if negative {
                coeff = -coeff;
            }
            poly.add_term(exp, coeff);
        }
        Ok(poly)
    }
}
