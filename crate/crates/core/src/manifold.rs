//! Formal expressions for integer homology spheres built from `±1/n`
//! surgeries on catalog knots, connected sums and orientation reversal.
//!
//! Text grammar:
//!
//! ```text
//! expr  := term ('#' term)*
//! term  := '-' term | '(' expr ')' | 'S3' | 'S3(' knot ',' coeff ')'
//! coeff := ['+'|'-'] '1' ['/' n]
//! ```
//!
//! For example `S3(T(2,3), 1) # -S3(D(1,2), -1/3)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::knots::KnotSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ManifoldError {
    #[error("surgery coefficient 1/0 is not a homology-sphere surgery")]
    ZeroCoefficient,
    #[error("cannot parse manifold expression {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ManifoldExpr {
    Sphere,
    /// Surgery on `knot` in `S^3` with coefficient `1/n`; a negative `n`
    /// encodes `-1/|n|`.
    Surgery { knot: KnotSpec, n: i64 },
    Sum(Vec<ManifoldExpr>),
    Reverse(Box<ManifoldExpr>),
}

impl ManifoldExpr {
    pub fn surgery(knot: KnotSpec, n: i64) -> Result<Self, ManifoldError> {
        if n == 0 {
            return Err(ManifoldError::ZeroCoefficient);
        }
        Ok(Self::Surgery { knot, n })
    }

    pub fn sum<I: IntoIterator<Item = ManifoldExpr>>(parts: I) -> Self {
        Self::Sum(parts.into_iter().collect())
    }

    pub fn reversed(self) -> Self {
        Self::Reverse(Box::new(self))
    }

    /// Folds over surgery pieces; `sign` is `-1` under an odd number of
    /// reversals.
    pub fn for_each_piece<E>(
        &self,
        f: &mut impl FnMut(&KnotSpec, i64, i64) -> Result<(), E>,
    ) -> Result<(), E> {
        self.walk(1, f)
    }

    fn walk<E>(
        &self,
        sign: i64,
        f: &mut impl FnMut(&KnotSpec, i64, i64) -> Result<(), E>,
    ) -> Result<(), E> {
        match self {
            Self::Sphere => Ok(()),
            Self::Surgery { knot, n } => f(knot, *n, sign),
            Self::Sum(parts) => parts.iter().try_for_each(|p| p.walk(sign, f)),
            Self::Reverse(inner) => inner.walk(-sign, f),
        }
    }
}

/// Coefficient text for `1/n`.
pub fn format_unit_fraction(n: i64) -> String {
    match n {
        1 => "1".into(),
        -1 => "-1".into(),
        n if n > 0 => format!("1/{n}"),
        n => format!("-1/{}", -n),
    }
}

/// Parses `±1` or `±1/n` and returns the signed `n`.
pub fn parse_unit_fraction(s: &str) -> Option<i64> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let n: i64 = match body.split_once('/') {
        None if body == "1" => 1,
        None => return None,
        Some(("1", den)) => den.parse().ok()?,
        Some(_) => return None,
    };
    if n == 0 {
        return None;
    }
    Some(if neg { -n } else { n })
}

impl fmt::Display for ManifoldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Sphere => write!(f, "S3"),
            Self::Surgery { knot, n } => write!(f, "S3({knot}, {})", format_unit_fraction(*n)),
            Self::Sum(parts) if parts.is_empty() => write!(f, "S3"),
            Self::Sum(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " # ")?;
                    }
                    match p {
                        Self::Sum(_) => write!(f, "({p})")?,
                        _ => write!(f, "{p}")?,
                    }
                }
                Ok(())
            }
            Self::Reverse(inner) => match **inner {
                Self::Sum(_) => write!(f, "-({inner})"),
                _ => write!(f, "-{inner}"),
            },
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: impl Into<String>) -> ManifoldError {
        ManifoldError::Parse { input: self.src.to_string(), reason: reason.into() }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ManifoldExpr, ManifoldError> {
        let mut parts = vec![self.term()?];
        while self.eat('#') {
            parts.push(self.term()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { ManifoldExpr::Sum(parts) })
    }

    fn term(&mut self) -> Result<ManifoldExpr, ManifoldError> {
        if self.eat('-') {
            return Ok(self.term()?.reversed());
        }
        if self.eat('(') {
            let e = self.expr()?;
            if !self.eat(')') {
                return Err(self.err("missing ')'"));
            }
            return Ok(e);
        }
        self.skip_ws();
        let rest: String = self.chars[self.pos..].iter().collect();
        if !rest.starts_with("S3") {
            return Err(self.err(format!("expected 'S3' at offset {}", self.pos)));
        }
        self.pos += 2;
        if !self.eat('(') {
            return Ok(ManifoldExpr::Sphere);
        }
        // Knot arguments contain parentheses and commas; split at the comma
        // that sits at depth zero.
        let start = self.pos;
        let mut depth = 0usize;
        let mut comma = None;
        let mut end = None;
        for (i, &c) in self.chars.iter().enumerate().skip(start) {
            match c {
                '(' => depth += 1,
                ')' if depth == 0 => {
                    end = Some(i);
                    break;
                }
                ')' => depth -= 1,
                ',' if depth == 0 => comma = Some(i),
                _ => {}
            }
        }
        let (comma, end) = match (comma, end) {
            (Some(c), Some(e)) => (c, e),
            _ => return Err(self.err("expected 'S3(knot, coefficient)'")),
        };
        let knot_str: String = self.chars[start..comma].iter().collect();
        let coeff_str: String = self.chars[comma + 1..end].iter().collect();
        self.pos = end + 1;
        let knot: KnotSpec = knot_str.parse().map_err(|e| self.err(format!("{e}")))?;
        let n = parse_unit_fraction(&coeff_str)
            .ok_or_else(|| self.err(format!("coefficient {:?} is not ±1/n", coeff_str.trim())))?;
        ManifoldExpr::surgery(knot, n)
    }
}

impl FromStr for ManifoldExpr {
    type Err = ManifoldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, chars: s.chars().collect(), pos: 0 };
        let e = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err(format!("trailing input at offset {}", p.pos)));
        }
        Ok(e)
    }
}

impl Serialize for ManifoldExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ManifoldExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
