//! Words in separating twists, bounding pair maps and (non-Torelli)
//! nonseparating twists; assembly of surgery presentations; d-invariant
//! bounds in terms of word length.
//!
//! Sign convention: a positive twist is left-handed, so power `+n` on a
//! curve with surface framing `s` becomes surgery coefficient `s - 1/n`.
//! A bounding pair map to the `n` contributes `s - 1/n` and `s + 1/n`.
//!
//! Word grammar:
//!
//! ```text
//! word   := ['g=' int ':'] (letter ('*' letter)* | 'id') ['|' eta (',' eta)*]
//! letter := gen ['^' int]
//! gen    := 'sep(' m [';' knot ',' s] ')'
//!         | 'bp(' m [';' curve ',' curve ',' s ',' l] ')'
//!         | 'nonsep(' knot ',' s ')'
//! eta    := 'eta(' i ',' j ')=' int
//! ```
//!
//! Bounding-pair curves are knot names (`T(2,3)`) or curve tags
//! (`cable(U;1;2)`). `eta(i,j)` is the linking number between the curves
//! of letters `i` and `j` (zero-based), which must both be bounding pairs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::dfloer::{d_surgery, DError, DValue, Sign};
use crate::knots::{seifert_genus, KnotError, KnotSpec};
use crate::manifold::ManifoldExpr;
use crate::surgery::{integral, rational, CurveSpec, SurgeryError, SurgeryPresentation};
use crate::{Integer, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorelliError {
    #[error("letter {letter} has no realization; assembly needs curves and framings")]
    UnrealizedGenerator { letter: usize },
    #[error("letter {letter} is a nonseparating twist, which is not in the Torelli group")]
    NonTorelliLetter { letter: usize },
    #[error("letter {letter} is not in the generating set")]
    LetterNotInA { letter: usize },
    #[error("invalid realization: {0}")]
    InvalidRealization(String),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error(transparent)]
    Knot(#[from] KnotError),
    #[error(transparent)]
    D(#[from] DError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SepRealization {
    pub knot: KnotSpec,
    pub s: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BpRealization {
    pub curves: (CurveSpec, CurveSpec),
    pub s: i64,
    pub ell: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Generator {
    SepTwist { m: u32, realization: Option<SepRealization> },
    BPMap { m: u32, realization: Option<BpRealization> },
    NonSepTwist { knot: KnotSpec, s: i64 },
}

impl Generator {
    pub fn sep(m: u32) -> Self {
        Self::SepTwist { m, realization: None }
    }

    pub fn bp(m: u32) -> Self {
        Self::BPMap { m, realization: None }
    }

    pub fn sep_realized(m: u32, knot: KnotSpec, s: i64) -> Self {
        Self::SepTwist { m, realization: Some(SepRealization { knot, s }) }
    }

    pub fn bp_realized(m: u32, curves: (CurveSpec, CurveSpec), s: i64, ell: i64) -> Self {
        Self::BPMap { m, realization: Some(BpRealization { curves, s, ell }) }
    }

    /// Smaller genus of the two sides; `None` for nonseparating twists.
    pub fn m(&self) -> Option<u32> {
        match self {
            Self::SepTwist { m, .. } | Self::BPMap { m, .. } => Some(*m),
            Self::NonSepTwist { .. } => None,
        }
    }

    pub fn is_torelli(&self) -> bool {
        !matches!(self, Self::NonSepTwist { .. })
    }

    pub fn is_realized(&self) -> bool {
        match self {
            Self::SepTwist { realization, .. } => realization.is_some(),
            Self::BPMap { realization, .. } => realization.is_some(),
            Self::NonSepTwist { .. } => true,
        }
    }

    /// Checks `m >= 1`, the fit on genus `g`, and realization consistency:
    /// a separating curve has surface framing 0 and bounds a Seifert
    /// surface of genus at most `m`; bounding-pair curves are homologous
    /// on the surface, so they link `s` times.
    pub fn validate(&self, genus: u32) -> Result<(), TorelliError> {
        if let Some(m) = self.m() {
            if m == 0 {
                return Err(TorelliError::InvalidGenerator(format!("{self}: m must be at least 1")));
            }
            if m > genus / 2 {
                return Err(TorelliError::InvalidGenerator(format!(
                    "{self}: m = {m} does not fit on a genus {genus} surface (m <= {})",
                    genus / 2
                )));
            }
        }
        match self {
            Self::SepTwist { m, realization: Some(r) } => {
                if r.s != 0 {
                    return Err(TorelliError::InvalidRealization(format!(
                        "{self}: a separating curve has surface framing 0, got {}",
                        r.s
                    )));
                }
                let g = seifert_genus(&r.knot);
                if g > u64::from(*m) {
                    return Err(TorelliError::InvalidRealization(format!(
                        "{self}: {} has genus {g} > m = {m}",
                        r.knot
                    )));
                }
            }
            Self::BPMap { realization: Some(r), .. } => {
                if r.ell != r.s {
                    return Err(TorelliError::InvalidRealization(format!(
                        "{self}: homologous curves with surface framing {} link {} times, not {}",
                        r.s, r.s, r.ell
                    )));
                }
                for c in [&r.curves.0, &r.curves.1] {
                    if matches!(c, CurveSpec::MeridianOf(_)) || c.to_string().contains("meridian(") {
                        return Err(TorelliError::InvalidRealization(format!(
                            "{self}: curves on the surface cannot refer to other components"
                        )));
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }
}

fn fmt_curve(c: &CurveSpec) -> String {
    match c {
        CurveSpec::Knot(k) => k.to_string(),
        other => other.to_string(),
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SepTwist { m, realization: None } => write!(f, "sep({m})"),
            Self::SepTwist { m, realization: Some(r) } => write!(f, "sep({m}; {}, {})", r.knot, r.s),
            Self::BPMap { m, realization: None } => write!(f, "bp({m})"),
            Self::BPMap { m, realization: Some(r) } => write!(
                f,
                "bp({m}; {}, {}, {}, {})",
                fmt_curve(&r.curves.0),
                fmt_curve(&r.curves.1),
                r.s,
                r.ell
            ),
            Self::NonSepTwist { knot, s } => write!(f, "nonsep({knot}, {s})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorelliWord {
    pub genus: u32,
    pub letters: Vec<(Generator, i64)>,
    /// Linking numbers between curves of different bounding-pair letters,
    /// keyed by zero-based letter indices `(i, j)` with `i < j`.
    pub eta: BTreeMap<(usize, usize), i64>,
}

impl TorelliWord {
    pub fn new(genus: u32, letters: Vec<(Generator, i64)>) -> Self {
        Self { genus, letters, eta: BTreeMap::new() }
    }

    pub fn empty(genus: u32) -> Self {
        Self::new(genus, Vec::new())
    }

    pub fn with_eta(mut self, i: usize, j: usize, v: i64) -> Self {
        let k = if i < j { (i, j) } else { (j, i) };
        if v == 0 {
            self.eta.remove(&k);
        } else {
            self.eta.insert(k, v);
        }
        self
    }

    pub fn validate(&self) -> Result<(), TorelliError> {
        for (g, _) in &self.letters {
            g.validate(self.genus)?;
        }
        for &(i, j) in self.eta.keys() {
            if i == j || j >= self.letters.len() {
                return Err(TorelliError::InvalidRealization(format!("eta({i},{j}) is out of range")));
            }
            for idx in [i, j] {
                if !matches!(self.letters[idx].0, Generator::BPMap { .. }) {
                    return Err(TorelliError::InvalidRealization(format!(
                        "eta({i},{j}): letter {idx} is not a bounding pair; separating curves link nothing"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Free reduction: adjacent letters on the same generator merge, zero
    /// powers drop. Linking data is discarded when letters merge.
    pub fn reduced(&self) -> TorelliWord {
        let merged = free_reduce(&self.letters);
        let eta = if merged.len() == self.letters.len() { self.eta.clone() } else { BTreeMap::new() };
        TorelliWord { genus: self.genus, letters: merged, eta }
    }
}

fn free_reduce<G: PartialEq + Clone>(letters: &[(G, i64)]) -> Vec<(G, i64)> {
    let mut out: Vec<(G, i64)> = Vec::new();
    for (g, n) in letters {
        match out.last_mut() {
            Some((top, p)) if top == g => {
                *p += n;
                if *p == 0 {
                    out.pop();
                }
            }
            _ if *n != 0 => out.push((g.clone(), *n)),
            _ => {}
        }
    }
    out
}

fn free_norm<G: PartialEq + Clone>(letters: &[(G, i64)]) -> u64 {
    free_reduce(letters).iter().map(|(_, n)| n.unsigned_abs()).sum()
}

/// Length of the word after merging adjacent equal generators.
pub fn word_norm(w: &TorelliWord) -> u64 {
    free_norm(&w.letters)
}

/// Surgery presentation of `Y_{S, w}`: letter `i` sits on the level
/// `S x {1/i}` and contributes its curves with Lickorish coefficients.
pub fn assemble(w: &TorelliWord, base: ManifoldExpr) -> Result<SurgeryPresentation, TorelliError> {
    assemble_with(w, base, false)
}

pub fn assemble_with(
    w: &TorelliWord,
    base: ManifoldExpr,
    allow_nontorelli: bool,
) -> Result<SurgeryPresentation, TorelliError> {
    w.validate()?;
    let mut p = SurgeryPresentation::over(base);
    let mut owned: Vec<Vec<u32>> = Vec::with_capacity(w.letters.len());
    for (i, (g, n)) in w.letters.iter().enumerate() {
        if *n == 0 {
            owned.push(Vec::new());
            continue;
        }
        let framed = |p: &mut SurgeryPresentation, curve: CurveSpec, s: i64, coeff: Rational| {
            let id = p.add(curve, coeff);
            p.get_mut(id).unwrap().surface_framing = Some(Integer::from(s));
            id
        };
        let ids = match g {
            Generator::SepTwist { realization: None, .. } | Generator::BPMap { realization: None, .. } => {
                return Err(TorelliError::UnrealizedGenerator { letter: i })
            }
            Generator::NonSepTwist { .. } if !allow_nontorelli => {
                return Err(TorelliError::NonTorelliLetter { letter: i })
            }
            Generator::NonSepTwist { knot, s } => {
                vec![framed(&mut p, CurveSpec::Knot(*knot), *s, integral(*s) - rational(1, *n))]
            }
            Generator::SepTwist { realization: Some(r), .. } => {
                vec![framed(&mut p, CurveSpec::Knot(r.knot), r.s, integral(r.s) - rational(1, *n))]
            }
            Generator::BPMap { realization: Some(r), .. } => {
                let a = framed(&mut p, r.curves.0.clone(), r.s, integral(r.s) - rational(1, *n));
                let b = framed(&mut p, r.curves.1.clone(), r.s, integral(r.s) + rational(1, *n));
                p.set_linking(a, b, Integer::from(r.ell));
                vec![a, b]
            }
        };
        owned.push(ids);
    }
    for (&(i, j), &v) in &w.eta {
        for &a in &owned[i] {
            for &b in &owned[j] {
                p.set_linking(a, b, Integer::from(v));
            }
        }
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugationReport {
    pub letters: usize,
    pub m_preserved: bool,
    pub norm_before: u64,
    pub norm_after: u64,
    pub invariant: bool,
}

/// Conjugates every letter by one formal mapping class `f`: the twist on
/// `c` becomes the twist on `f(c)`, with the same side genera. Checks that
/// the m-data and the word norm survive.
pub fn conjugate_invariance_check(w: &TorelliWord) -> ConjugationReport {
    // A conjugated letter is the pair (f, generator); f acts bijectively on
    // curves and preserves side genera.
    let conj: Vec<((&str, &Generator), i64)> = w.letters.iter().map(|(g, n)| (("f", g), *n)).collect();
    let m_preserved = conj.iter().zip(&w.letters).all(|(((_, c), n), (g, k))| c.m() == g.m() && n == k);
    let norm_before = word_norm(w);
    let norm_after = free_norm(&conj);
    ConjugationReport {
        letters: w.letters.len(),
        m_preserved,
        norm_before,
        norm_after,
        invariant: m_preserved && norm_before == norm_after,
    }
}

fn ceil_half(m: u32) -> i64 {
    i64::from(m.div_ceil(2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectBound {
    /// Bound on `|d(Y) - d(Y_phi)|`.
    pub bound: i64,
    /// For a separating twist to a positive power, `d(Y_phi) - d(Y)` lies
    /// in this interval; negate it for negative powers.
    pub refined: Option<(i64, i64)>,
}

/// `2 ceil(m/2)` for a separating twist or bounding pair map on a curve
/// whose sides have smaller genus `m`.
pub fn generator_defect_bound(g: &Generator) -> Result<DefectBound, TorelliError> {
    match g {
        Generator::NonSepTwist { .. } => Err(TorelliError::NonTorelliLetter { letter: 0 }),
        Generator::SepTwist { m, .. } => {
            // m plus the bottom d-invariant of the Euler number -1 bundle
            // over a genus m surface, which is m mod 2.
            let top = i64::from(*m) + i64::from(*m % 2);
            debug_assert_eq!(top, 2 * ceil_half(*m));
            Ok(DefectBound { bound: 2 * ceil_half(*m), refined: Some((0, top)) })
        }
        Generator::BPMap { m, .. } => {
            // Lower bound (-1)^m/2 - (2m+1)/2 from the twisted d-invariant
            // of the trivial bundle.
            let m_i = i64::from(*m);
            let sign = if m % 2 == 0 { 1 } else { -1 };
            let lower = Ratio::new(sign, 2) - Ratio::new(2 * m_i + 1, 2);
            let bound = 2 * ceil_half(*m);
            if lower != Ratio::from_integer(-bound) {
                return Err(TorelliError::InvalidGenerator(format!(
                    "bounding pair constant {lower} disagrees with -2 ceil(m/2) = {}",
                    -bound
                )));
            }
            Ok(DefectBound { bound, refined: None })
        }
    }
}

/// `2 ceil(k_A / 2) ||w||_A` where `k_A` is the largest `m` in `a`.
pub fn word_bound(w: &TorelliWord, a: &[Generator]) -> Result<Integer, TorelliError> {
    for (i, (g, _)) in w.letters.iter().enumerate() {
        if !a.contains(g) {
            return Err(TorelliError::LetterNotInA { letter: i });
        }
    }
    let mut k_a = 0;
    for (i, g) in a.iter().enumerate() {
        k_a = k_a.max(g.m().ok_or(TorelliError::NonTorelliLetter { letter: i })?);
    }
    Ok(Integer::from(2 * ceil_half(k_a)) * word_norm(w))
}

/// Per-letter d-defect cap over all separating twists and bounding pair
/// maps on a genus `g` surface.
pub fn infinity_norm_cap(genus: u32) -> i64 {
    2 * ceil_half(genus / 2)
}

/// Lower bound on `||phi||_inf` for any Torelli word producing `d`.
pub fn norm_lower_bound_from_d(d: DValue, genus: u32) -> Result<u64, TorelliError> {
    if genus < 2 {
        return Err(TorelliError::InvalidGenerator(format!(
            "genus {genus} has no separating twists or bounding pairs"
        )));
    }
    let cap = infinity_norm_cap(genus) as u64;
    Ok(d.get().unsigned_abs().div_ceil(cap))
}

/// `2 |n| ceil(g/2)` for `1/n` surgery on a genus `g` knot.
pub fn surgery_bound(n: i64, genus_k: u64) -> Integer {
    Integer::from(2) * Integer::from(n.unsigned_abs()) * Integer::from(genus_k.div_ceil(2))
}

/// `C ||phi||^2` for a caller-supplied constant.
pub fn bfp_bound(norm: u64, c: &Rational) -> Rational {
    c * Ratio::from_integer(Integer::from(norm) * Integer::from(norm))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonSepExample {
    pub k: u32,
    pub companion: KnotSpec,
    pub meridional_wraps: i64,
    pub surface_framing: i64,
    pub manifold: String,
    pub d: DValue,
    pub word_norm: u64,
}

/// The curve `C_k`: a copy of `T(2, 4k+1)` wrapped `-(8k+2)` times around
/// a meridian, with surface framing 0 afterwards. One nonseparating twist
/// along it produces `S^3_{+1}(T(2, 4k+1))`, with `d = -2k`.
pub fn nonsep_example(k: u32) -> Result<NonSepExample, TorelliError> {
    if k == 0 {
        return Err(TorelliError::InvalidGenerator("k must be at least 1".into()));
    }
    let q = 4 * i64::from(k) + 1;
    let companion = KnotSpec::torus(2, q)?;
    let manifold = ManifoldExpr::surgery(companion, 1).expect("nonzero");
    let d = d_surgery(&companion, Sign::Plus, 1)?;
    let word = TorelliWord::new(2, vec![(Generator::NonSepTwist { knot: companion, s: 0 }, 1)]);
    Ok(NonSepExample {
        k,
        companion,
        meridional_wraps: -(2 * q),
        surface_framing: 0,
        manifold: manifold.to_string(),
        d,
        word_norm: word_norm(&word),
    })
}

/// Splits at top-level occurrences of `sep`, ignoring separators nested in
/// parentheses.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_int<T: FromStr>(s: &str, what: &str) -> Result<T, TorelliError> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    t.parse().map_err(|_| TorelliError::Parse(format!("{what}: {s:?} is not an integer")))
}

fn parse_curve(s: &str) -> Result<CurveSpec, TorelliError> {
    if let Ok(k) = s.parse::<KnotSpec>() {
        return Ok(CurveSpec::Knot(k));
    }
    s.parse::<CurveSpec>().map_err(TorelliError::Parse)
}

impl FromStr for Generator {
    type Err = TorelliError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let open = s.find('(').ok_or_else(|| TorelliError::Parse(format!("unknown generator {input:?}")))?;
        let head = &s[..open];
        let inner = s[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| TorelliError::Parse(format!("unbalanced parentheses in {input:?}")))?;
        let (m_part, rest) = match split_top(inner, ';').as_slice() {
            [m] => (*m, None),
            [m, r] => (*m, Some(*r)),
            _ => return Err(TorelliError::Parse(format!("too many ';' in {input:?}"))),
        };
        match head {
            "sep" => {
                let m = parse_int(m_part, "m")?;
                match rest {
                    None => Ok(Self::sep(m)),
                    Some(r) => match split_top(r, ',').as_slice() {
                        [k, sv] => Ok(Self::sep_realized(
                            m,
                            k.parse().map_err(|e: KnotError| TorelliError::Parse(e.to_string()))?,
                            parse_int(sv, "s")?,
                        )),
                        _ => Err(TorelliError::Parse(format!("sep realization is 'K, s' in {input:?}"))),
                    },
                }
            }
            "bp" => {
                let m = parse_int(m_part, "m")?;
                match rest {
                    None => Ok(Self::bp(m)),
                    Some(r) => match split_top(r, ',').as_slice() {
                        [a, b, sv, l] => Ok(Self::bp_realized(
                            m,
                            (parse_curve(a)?, parse_curve(b)?),
                            parse_int(sv, "s")?,
                            parse_int(l, "l")?,
                        )),
                        _ => Err(TorelliError::Parse(format!("bp realization is 'C1, C2, s, l' in {input:?}"))),
                    },
                }
            }
            "nonsep" => {
                if rest.is_some() {
                    return Err(TorelliError::Parse(format!("nonsep takes 'K, s' in {input:?}")));
                }
                match split_top(m_part, ',').as_slice() {
                    [k, sv] => Ok(Self::NonSepTwist {
                        knot: k.parse().map_err(|e: KnotError| TorelliError::Parse(e.to_string()))?,
                        s: parse_int(sv, "s")?,
                    }),
                    _ => Err(TorelliError::Parse(format!("nonsep takes 'K, s' in {input:?}"))),
                }
            }
            _ => Err(TorelliError::Parse(format!("unknown generator {head:?}"))),
        }
    }
}

impl fmt::Display for TorelliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={}: ", self.genus)?;
        if self.letters.is_empty() {
            write!(f, "id")?;
        }
        for (i, (g, n)) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "{g}")?;
            if *n != 1 {
                write!(f, "^{n}")?;
            }
        }
        for (i, ((a, b), v)) in self.eta.iter().enumerate() {
            write!(f, "{}eta({a},{b})={v}", if i == 0 { " | " } else { ", " })?;
        }
        Ok(())
    }
}

impl TorelliWord {
    /// Parses a word; `default_genus` is used when the text has no `g=`
    /// prefix.
    pub fn parse_with_genus(input: &str, default_genus: Option<u32>) -> Result<Self, TorelliError> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let (genus, body) = match s.strip_prefix("g=") {
            Some(rest) => {
                let (g, body) = rest
                    .split_once(':')
                    .ok_or_else(|| TorelliError::Parse("expected ':' after the genus".into()))?;
                (parse_int(g, "genus")?, body.to_string())
            }
            None => (
                default_genus.ok_or_else(|| TorelliError::Parse("word has no genus; prefix it with 'g=<genus>:'".into()))?,
                s,
            ),
        };
        let parts = split_top(&body, '|');
        let (letters_text, eta_text) = match parts.as_slice() {
            [l] => (*l, None),
            [l, e] => (*l, Some(*e)),
            _ => return Err(TorelliError::Parse("more than one '|' in word".into())),
        };
        let mut w = TorelliWord::empty(genus);
        if letters_text != "id" && !letters_text.is_empty() {
            for item in split_top(letters_text, '*') {
                let (gen_text, power) = match item.rfind(")^") {
                    Some(pos) => (&item[..=pos], parse_int(&item[pos + 2..], "power")?),
                    None => (item, 1i64),
                };
                w.letters.push((gen_text.parse()?, power));
            }
        }
        if let Some(e) = eta_text {
            for clause in split_top(e, ',') {
                let (lhs, v) = clause
                    .split_once(")=")
                    .ok_or_else(|| TorelliError::Parse(format!("bad eta clause {clause:?}")))?;
                let idx = lhs
                    .strip_prefix("eta(")
                    .ok_or_else(|| TorelliError::Parse(format!("bad eta clause {clause:?}")))?;
                let (i, j) = idx
                    .split_once(',')
                    .ok_or_else(|| TorelliError::Parse(format!("bad eta clause {clause:?}")))?;
                w = w.with_eta(parse_int(i, "eta index")?, parse_int(j, "eta index")?, parse_int(v, "eta")?);
            }
        }
        Ok(w)
    }
}

impl FromStr for TorelliWord {
    type Err = TorelliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_with_genus(s, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surgery::{reduce, ReduceOutcome};

    fn knot(s: &str) -> KnotSpec {
        s.parse().unwrap()
    }

    fn sep(k: &str, m: u32) -> Generator {
        Generator::sep_realized(m, knot(k), 0)
    }

    #[test]
    fn assemble_single_separating_twist() {
        for n in [-3i64, -1, 1, 4] {
            let w = TorelliWord::new(2, vec![(sep("T(2,3)", 1), n)]);
            let p = assemble(&w, ManifoldExpr::Sphere).unwrap();
            assert_eq!(p.len(), 1);
            assert_eq!(p.components()[0].coeff, rational(-1, n));
            assert_eq!(p.homology_order(), Integer::from(1));
        }
    }

    #[test]
    fn assemble_bounding_pair() {
        for (n, s) in [(1i64, 0i64), (3, 2), (-2, -5)] {
            let g = Generator::bp_realized(1, (CurveSpec::Knot(knot("T(2,3)")), CurveSpec::UnlinkComponent), s, s);
            let p = assemble(&TorelliWord::new(3, vec![(g, n)]), ManifoldExpr::Sphere).unwrap();
            let c = p.components();
            assert_eq!(c[0].coeff, integral(s) - rational(1, n));
            assert_eq!(c[1].coeff, integral(s) + rational(1, n));
            assert_eq!(p.linking(c[0].id, c[1].id), Integer::from(s));
            assert_eq!(p.homology_order(), Integer::from(1));
        }
    }

    #[test]
    fn assemble_errors() {
        assert!(assemble(&TorelliWord::empty(2), ManifoldExpr::Sphere).unwrap().is_empty());
        let unrealized = TorelliWord::new(2, vec![(Generator::sep(1), 1)]);
        assert_eq!(
            assemble(&unrealized, ManifoldExpr::Sphere),
            Err(TorelliError::UnrealizedGenerator { letter: 0 })
        );
        let nonsep = TorelliWord::new(2, vec![(Generator::NonSepTwist { knot: knot("T(2,5)"), s: 0 }, 1)]);
        assert_eq!(assemble(&nonsep, ManifoldExpr::Sphere), Err(TorelliError::NonTorelliLetter { letter: 0 }));
        assert!(assemble_with(&nonsep, ManifoldExpr::Sphere, true).is_ok());
        let bad_s = TorelliWord::new(2, vec![(Generator::sep_realized(1, knot("T(2,3)"), 2), 1)]);
        assert!(matches!(assemble(&bad_s, ManifoldExpr::Sphere), Err(TorelliError::InvalidRealization(_))));
        let too_big = TorelliWord::new(2, vec![(sep("T(2,7)", 1), 1)]);
        assert!(matches!(assemble(&too_big, ManifoldExpr::Sphere), Err(TorelliError::InvalidRealization(_))));
        let no_fit = TorelliWord::new(3, vec![(sep("T(2,3)", 2), 1)]);
        assert!(matches!(assemble(&no_fit, ManifoldExpr::Sphere), Err(TorelliError::InvalidGenerator(_))));
    }

    #[test]
    fn norms() {
        let phi = Generator::sep(1);
        let psi = Generator::bp(1);
        assert_eq!(word_norm(&TorelliWord::new(2, vec![(phi.clone(), 1)])), 1);
        assert_eq!(word_norm(&TorelliWord::new(2, vec![(phi.clone(), 3), (psi.clone(), -2)])), 5);
        assert_eq!(word_norm(&TorelliWord::new(2, vec![(phi.clone(), 2), (phi.clone(), -2)])), 0);
        let nested = vec![(phi.clone(), 1), (psi.clone(), 2), (psi.clone(), -2), (phi.clone(), 4)];
        assert_eq!(word_norm(&TorelliWord::new(2, nested)), 5);
    }

    #[test]
    fn conjugation() {
        let w = TorelliWord::new(4, vec![(Generator::sep(2), 3), (Generator::bp(1), -1), (Generator::sep(2), 1)]);
        let r = conjugate_invariance_check(&w);
        assert!(r.invariant);
        assert_eq!(r.norm_before, 5);
    }

    #[test]
    fn defect_bounds() {
        assert_eq!(generator_defect_bound(&Generator::sep(1)).unwrap().bound, 2);
        assert_eq!(generator_defect_bound(&Generator::bp(4)).unwrap().bound, 4);
        assert_eq!(generator_defect_bound(&Generator::sep(3)).unwrap().refined, Some((0, 4)));
        for m in 1..40 {
            assert_eq!(generator_defect_bound(&Generator::bp(m)).unwrap().bound, 2 * i64::from(m.div_ceil(2)));
        }
        assert!(generator_defect_bound(&Generator::NonSepTwist { knot: KnotSpec::unknot(), s: 0 }).is_err());
    }

    #[test]
    fn word_bounds() {
        let a = [Generator::sep(1), Generator::bp(1)];
        let w = TorelliWord::new(2, vec![(a[0].clone(), 4), (a[1].clone(), -3)]);
        assert_eq!(word_bound(&w, &a).unwrap(), Integer::from(14));
        assert_eq!(word_bound(&TorelliWord::empty(2), &a).unwrap(), Integer::from(0));
        let a3 = [Generator::sep(3)];
        let w3 = TorelliWord::new(6, vec![(a3[0].clone(), 2)]);
        assert_eq!(word_bound(&w3, &a3).unwrap(), Integer::from(8));
        assert_eq!(word_bound(&w3, &a), Err(TorelliError::LetterNotInA { letter: 0 }));
    }

    #[test]
    fn scalar_bounds() {
        for n in 1..30 {
            assert_eq!(norm_lower_bound_from_d(DValue::new(-2 * n).unwrap(), 2).unwrap(), n as u64);
        }
        assert_eq!(norm_lower_bound_from_d(DValue::ZERO, 7).unwrap(), 0);
        assert_eq!(norm_lower_bound_from_d(DValue::new(-100).unwrap(), 5).unwrap(), 50);
        assert!(norm_lower_bound_from_d(DValue::ZERO, 1).is_err());
        assert_eq!(surgery_bound(1, 1), Integer::from(2));
        assert_eq!(surgery_bound(0, 9), Integer::from(0));
        assert_eq!(surgery_bound(-3, 4), Integer::from(12));
        assert_eq!(bfp_bound(3, &integral(1)), integral(9));
        assert_eq!(bfp_bound(0, &rational(7, 3)), integral(0));
        assert_eq!(bfp_bound(10, &rational(1, 2)), integral(50));
    }

    #[test]
    fn nonsep_examples() {
        assert_eq!(nonsep_example(1).unwrap().d.get(), -2);
        assert_eq!(nonsep_example(1).unwrap().meridional_wraps, -10);
        for k in 1..=20 {
            let e = nonsep_example(k).unwrap();
            assert_eq!(e.d.get(), -2 * i64::from(k));
            assert_eq!(e.word_norm, 1);
        }
        assert!(nonsep_example(0).is_err());
    }

    #[test]
    fn separating_sharpness() {
        // -1 surgery on mT(2, 2k+1), genus k: the refined upper end 2 ceil(k/2)
        // is attained.
        for k in 1..=25u32 {
            let t = KnotSpec::torus(2, 2 * i64::from(k) + 1).unwrap().mirrored();
            let g = Generator::sep_realized(k, t, 0);
            let w = TorelliWord::new(2 * k, vec![(g.clone(), 1)]);
            let p = assemble(&w, ManifoldExpr::Sphere).unwrap();
            let ReduceOutcome::Manifold { result, .. } = reduce(&p).unwrap() else { panic!() };
            let d = crate::dfloer::d_manifold(&result).unwrap().get();
            let (lo, hi) = generator_defect_bound(&g).unwrap().refined.unwrap();
            assert!(lo <= d && d <= hi);
            assert_eq!(d, hi);
        }
    }

    #[test]
    fn grammar_round_trip() {
        for s in [
            "g=2: id",
            "g=3: sep(1; T(2,3), 0)^-2 * bp(1; T(2,5), cable(U;1;2), 1, 1)^3",
            "g=4: sep(2) * bp(1)^-1",
            "g=2: nonsep(T(2,5), 0)",
            "g=5: bp(1; U, U, 0, 0) * bp(2; U, T(2,3), 2, 2)^2 | eta(0,1)=3",
        ] {
            let w: TorelliWord = s.parse().unwrap();
            assert_eq!(w.to_string(), s);
        }
        let w = TorelliWord::parse_with_genus("sep(1;T(2,3),0)^(-1)", Some(2)).unwrap();
        assert_eq!(w.letters[0].1, -1);
        assert!("sep(1)".parse::<TorelliWord>().is_err());
        assert!("g=2: twist(1)".parse::<TorelliWord>().is_err());
    }

    #[test]
    fn eta_fills_cross_linking() {
        let bp = |s| Generator::bp_realized(1, (CurveSpec::UnlinkComponent, CurveSpec::UnlinkComponent), s, s);
        let w = TorelliWord::new(3, vec![(bp(1), 2), (bp(-2), -3)]).with_eta(0, 1, 4);
        let p = assemble(&w, ManifoldExpr::Sphere).unwrap();
        let ids = p.ids();
        for a in &ids[..2] {
            for b in &ids[2..] {
                assert_eq!(p.linking(*a, *b), Integer::from(4));
            }
        }
        assert_eq!(p.homology_order(), Integer::from(1));
        let with_sep = TorelliWord::new(3, vec![(sep("T(2,3)", 1), 1), (bp(0), 1)]).with_eta(0, 1, 1);
        assert!(assemble(&with_sep, ManifoldExpr::Sphere).is_err());
    }
}
