use std::fmt;
use std::str::FromStr;

use crate::knots::{KnotFamily, KnotSpec};

pub type ComponentId = u32;

/// Construction tag for a link component.
///
/// Text grammar: `knot(K)`, `meridian(id)`, `cable(K;l;s)` for strand `s`
/// of the `(2, 2l)` cable of `K`, `bing(C;s)`, `unlink`, `borromean(i)`,
/// `wh(C)` for the positive Whitehead double of `C`, and `twisted(C)` for a
/// curve whose knot type was changed by a blow-down.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveSpec {
    Knot(KnotSpec),
    MeridianOf(ComponentId),
    CableStrand { companion: KnotSpec, twist: i64, strand: u8 },
    BingPairStrand { of: Box<CurveSpec>, strand: u8 },
    UnlinkComponent,
    Borromean(u8),
    WhiteheadDouble(Box<CurveSpec>),
    Twisted(Box<CurveSpec>),
}

impl CurveSpec {
    pub fn bing(of: CurveSpec, strand: u8) -> Self {
        Self::BingPairStrand { of: Box::new(of), strand }
    }

    pub fn whitehead(of: CurveSpec) -> Self {
        Self::WhiteheadDouble(Box::new(of))
    }

    /// True for curves that bound an embedded disc in the complement of
    /// nothing but the components they link algebraically.
    pub fn is_unknotted(&self) -> bool {
        match self {
            Self::UnlinkComponent | Self::MeridianOf(_) => true,
            Self::Knot(k) => k.canonical().family == KnotFamily::Unknot,
            _ => false,
        }
    }

    /// Strips leading Whitehead doubles: `wh(wh(C))` gives `(2, C)`.
    pub fn peel_whitehead(&self) -> (u32, &CurveSpec) {
        let mut depth = 0;
        let mut cur = self;
        while let Self::WhiteheadDouble(inner) = cur {
            depth += 1;
            cur = inner;
        }
        (depth, cur)
    }

    pub fn wrap_whitehead(self, depth: u32) -> Self {
        (0..depth).fold(self, |c, _| Self::whitehead(c))
    }

    /// Catalog knot type, when the tag determines one.
    pub fn knot_type(&self) -> Option<KnotSpec> {
        match self {
            Self::Knot(k) => Some(*k),
            Self::UnlinkComponent | Self::MeridianOf(_) => Some(KnotSpec::unknot()),
            Self::WhiteheadDouble(_) => {
                let (depth, core) = self.peel_whitehead();
                let k = core.knot_type()?.canonical();
                let t23 = KnotSpec::torus(2, 3).ok()?;
                match k.family {
                    KnotFamily::WhiteheadIterate(j) if !k.mirror => {
                        Some(KnotSpec::whitehead_iterate(j + depth))
                    }
                    _ if k == t23 => Some(KnotSpec::whitehead_iterate(depth)),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// Renames component references.
    pub fn remap(&self, f: &impl Fn(ComponentId) -> ComponentId) -> Self {
        match self {
            Self::MeridianOf(c) => Self::MeridianOf(f(*c)),
            Self::BingPairStrand { of, strand } => Self::bing(of.remap(f), *strand),
            Self::WhiteheadDouble(c) => Self::whitehead(c.remap(f)),
            Self::Twisted(c) => Self::Twisted(Box::new(c.remap(f))),
            other => other.clone(),
        }
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Knot(k) => write!(f, "knot({k})"),
            Self::MeridianOf(c) => write!(f, "meridian({c})"),
            Self::CableStrand { companion, twist, strand } => {
                write!(f, "cable({companion};{twist};{strand})")
            }
            Self::BingPairStrand { of, strand } => write!(f, "bing({of};{strand})"),
            Self::UnlinkComponent => write!(f, "unlink"),
            Self::Borromean(i) => write!(f, "borromean({i})"),
            Self::WhiteheadDouble(c) => write!(f, "wh({c})"),
            Self::Twisted(c) => write!(f, "twisted({c})"),
        }
    }
}

/// Splits `a;b;c` at top-level semicolons.
fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ';' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl FromStr for CurveSpec {
    type Err = String;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "unlink" {
            return Ok(Self::UnlinkComponent);
        }
        let open = s.find('(').ok_or_else(|| format!("unknown curve {input:?}"))?;
        let head = &s[..open];
        let inner = s[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| format!("unbalanced parentheses in {input:?}"))?;
        let args = split_args(inner);
        let strand = |a: &str| -> Result<u8, String> {
            match a.parse::<u8>() {
                Ok(v @ (1 | 2)) => Ok(v),
                _ => Err(format!("strand index must be 1 or 2, got {a:?}")),
            }
        };
        let arity = |n: usize| -> Result<(), String> {
            if args.len() == n {
                Ok(())
            } else {
                Err(format!("{head} takes {n} arguments, got {}", args.len()))
            }
        };
        match head {
            "knot" => {
                arity(1)?;
                Ok(Self::Knot(args[0].parse().map_err(|e| format!("{e}"))?))
            }
            "meridian" => {
                arity(1)?;
                Ok(Self::MeridianOf(args[0].parse().map_err(|_| format!("bad id {:?}", args[0]))?))
            }
            "cable" => {
                arity(3)?;
                Ok(Self::CableStrand {
                    companion: args[0].parse().map_err(|e| format!("{e}"))?,
                    twist: args[1].parse().map_err(|_| format!("bad twist {:?}", args[1]))?,
                    strand: strand(args[2])?,
                })
            }
            "bing" => {
                arity(2)?;
                Ok(Self::bing(args[0].parse()?, strand(args[1])?))
            }
            "borromean" => {
                arity(1)?;
                match args[0].parse::<u8>() {
                    Ok(i @ 0..=2) => Ok(Self::Borromean(i)),
                    _ => Err(format!("Borromean index must be 0, 1 or 2, got {:?}", args[0])),
                }
            }
            "wh" => {
                arity(1)?;
                Ok(Self::whitehead(args[0].parse()?))
            }
            "twisted" => {
                arity(1)?;
                Ok(Self::Twisted(Box::new(args[0].parse()?)))
            }
            _ => Err(format!("unknown curve constructor {head:?}")),
        }
    }
}
