//! Brunnian links obtained from the Borromean rings by iterated Bing
//! doubling of one component, and their `±1` surgeries.
//!
//! `build_brunnian(n)` keeps `borromean(0)` and `borromean(1)` and doubles
//! `borromean(2)` `n - 3` times, always re-doubling strand `2`:
//!
//! ```text
//! borromean(0), borromean(1), bing(borromean(2);1), bing(bing(borromean(2);2);1), ...
//! ```
//!
//! Reduction of the full link at `+1`: a Bing pair with `+1` framings
//! and no linking becomes the `+1`-framed positive Whitehead double of its
//! companion; after all pairs are collapsed, blowing down the two untouched
//! Borromean components turns `borromean(2)` into `T(2,3)`. The result is
//! `+1` surgery on the `(n-3)`-fold Whitehead double of the trefoil.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::{integral, ComponentId, CurveSpec, SurgeryError, SurgeryPresentation};
use crate::knots::KnotSpec;
use crate::manifold::ManifoldExpr;
use crate::Integer;

pub fn build_brunnian(n: u32) -> Result<SurgeryPresentation, SurgeryError> {
    if n < 3 {
        return Err(SurgeryError::Invalid(format!(
            "Brunnian links in this family have at least 3 components, got {n}"
        )));
    }
    let mut p = SurgeryPresentation::empty();
    p.add(CurveSpec::Borromean(0), integral(1));
    p.add(CurveSpec::Borromean(1), integral(1));
    let mut root = CurveSpec::Borromean(2);
    for _ in 0..n - 3 {
        p.add(CurveSpec::bing(root.clone(), 1), integral(1));
        root = CurveSpec::bing(root, 2);
    }
    p.add(root, integral(1));
    Ok(p)
}

/// Bing depth of a chain rooted at `borromean(2)` whose inner strands are
/// all `2`, or `None` for any other curve.
fn chain_depth(c: &CurveSpec) -> Option<u32> {
    match c {
        CurveSpec::Borromean(2) => Some(0),
        CurveSpec::BingPairStrand { of, .. } => inner_depth(of).map(|d| d + 1),
        _ => None,
    }
}

fn inner_depth(c: &CurveSpec) -> Option<u32> {
    match c {
        CurveSpec::Borromean(2) => Some(0),
        CurveSpec::BingPairStrand { of, strand: 2 } => inner_depth(of).map(|d| d + 1),
        _ => None,
    }
}

/// `bing(...bing(borromean(2);2)...;2)` with `depth` layers.
fn spine(depth: u32) -> CurveSpec {
    (0..depth).fold(CurveSpec::Borromean(2), |c, _| CurveSpec::bing(c, 2))
}

/// True when every component is tagged as part of the family and at least
/// one carries a Borromean or Bing tag.
pub(crate) fn is_brunnian_descriptor(p: &SurgeryPresentation) -> bool {
    !p.is_empty()
        && p.components().iter().all(|c| match c.curve {
            CurveSpec::Borromean(0 | 1) => true,
            ref other => chain_depth(other).is_some(),
        })
}

/// Collapses the Bing pair `(bing(X;1), wh^j(bing(X;2)))` into
/// `wh^{j+1}(X)`. Both strands must have coefficient `+1` and link nothing.
pub fn bing_pair_rewrite(
    p: &SurgeryPresentation,
    strand1: ComponentId,
    strand2: ComponentId,
) -> Result<SurgeryPresentation, SurgeryError> {
    let a = p.component(strand1)?;
    let b = p.component(strand2)?;
    let mismatch = |m: String| Err(SurgeryError::PatternMismatch(vec![m]));
    let CurveSpec::BingPairStrand { of: x, strand: 1 } = &a.curve else {
        return mismatch(format!("component {strand1} ({}) is not a strand-1 Bing curve", a.curve));
    };
    let (j, core) = b.curve.peel_whitehead();
    if *core != CurveSpec::bing((**x).clone(), 2) {
        return mismatch(format!("component {strand2} ({}) is not the partner of {}", b.curve, a.curve));
    }
    let mut problems = Vec::new();
    for c in [a, b] {
        if c.coeff != integral(1) {
            problems.push(format!("component {} has coefficient {}, expected 1", c.id, c.coeff));
        }
        for o in p.ids() {
            if !p.linking(c.id, o).is_zero() {
                problems.push(format!("component {} links component {o}", c.id));
            }
        }
    }
    if !problems.is_empty() {
        return Err(SurgeryError::PatternMismatch(problems));
    }
    let merged = CurveSpec::whitehead((**x).clone()).wrap_whitehead(j);
    let mut out = p.clone();
    out.remove(strand2)?;
    let c = out.get_mut(strand1).unwrap();
    c.curve = merged;
    Ok(out)
}

/// Blows down `borromean(0)` and `borromean(1)` at `+1`; the remaining
/// component `wh^j(borromean(2))` becomes `wh^j(T(2,3))` with its
/// coefficient unchanged.
pub fn borromean_blow_down(p: &SurgeryPresentation) -> Result<SurgeryPresentation, SurgeryError> {
    let find = |i: u8| {
        p.components()
            .iter()
            .find(|c| c.curve == CurveSpec::Borromean(i))
            .ok_or_else(|| SurgeryError::PatternMismatch(vec![format!("borromean({i}) is missing")]))
    };
    let (b0, b1) = (find(0)?, find(1)?);
    let third: Vec<_> = p
        .components()
        .iter()
        .filter(|c| c.id != b0.id && c.id != b1.id)
        .collect();
    let mut problems = Vec::new();
    for b in [b0, b1] {
        if b.coeff != integral(1) {
            problems.push(format!("{} has coefficient {}, expected 1", b.curve, b.coeff));
        }
    }
    if third.len() != 1 {
        problems.push(format!("expected exactly three components, found {}", p.len()));
        return Err(SurgeryError::PatternMismatch(problems));
    }
    let c = third[0];
    let (depth, core) = c.curve.peel_whitehead();
    if *core != CurveSpec::Borromean(2) {
        problems.push(format!("third component {} is not a Whitehead double of borromean(2)", c.curve));
    }
    for (x, y) in [(b0.id, b1.id), (b0.id, c.id), (b1.id, c.id)] {
        if !p.linking(x, y).is_zero() {
            problems.push(format!("components {x} and {y} link"));
        }
    }
    if !problems.is_empty() {
        return Err(SurgeryError::PatternMismatch(problems));
    }
    let trefoil = CurveSpec::Knot(KnotSpec::torus(2, 3).expect("coprime"));
    let mut out = SurgeryPresentation::over(p.base.clone());
    let mut comp = c.clone();
    comp.curve = trefoil.wrap_whitehead(depth);
    out.push(comp)?;
    Ok(out)
}

/// Reduces a `±1` surgery on a member of the family, or on a sublink of
/// one. Proper sublinks are unlinks and give the base manifold back.
pub fn reduce_brunnian(p: &SurgeryPresentation) -> Result<ManifoldExpr, SurgeryError> {
    if !is_brunnian_descriptor(p) {
        return Err(SurgeryError::NotBrunnianDescriptor(
            "components must be borromean(i) or Bing strands rooted at borromean(2)".into(),
        ));
    }
    p.validate()?;
    let ids = p.ids();
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            if !p.linking(a, b).is_zero() {
                return Err(SurgeryError::NotBrunnianDescriptor(format!(
                    "components {a} and {b} link; Brunnian links have zero linking numbers"
                )));
            }
        }
    }
    let mut sign = None;
    for c in p.components() {
        let s = match c.integer_coeff() {
            Some(v) if v.abs().is_one() => v,
            _ => {
                return Err(SurgeryError::NotBrunnianDescriptor(format!(
                    "component {} has coefficient {}, expected ±1",
                    c.id, c.coeff
                )))
            }
        };
        match &sign {
            None => sign = Some(s),
            Some(prev) if *prev != s => {
                return Err(SurgeryError::Invalid(
                    "mixed ±1 coefficients on a Brunnian link are not reduced".into(),
                ))
            }
            _ => {}
        }
    }
    let sign = sign.expect("non-empty");

    let depth = p.components().iter().filter_map(|c| chain_depth(&c.curve)).max().unwrap_or(0);
    let has = |c: &CurveSpec| p.components().iter().any(|x| &x.curve == c);
    if depth > 0 && has(&CurveSpec::Borromean(2)) {
        return Err(SurgeryError::NotBrunnianDescriptor(
            "borromean(2) cannot coexist with its own Bing doubles".into(),
        ));
    }
    let full = has(&CurveSpec::Borromean(0))
        && has(&CurveSpec::Borromean(1))
        && has(&spine(depth))
        && (1..=depth).all(|k| has(&CurveSpec::bing(spine(k - 1), 1)))
        && p.len() as u32 == depth + 3;
    if !full {
        return Ok(p.base.clone());
    }

    // Work at +1; the -1 case is the mirror image.
    let mut cur = p.clone();
    if sign < Integer::zero() {
        for c in cur.components.iter_mut() {
            c.coeff = Ratio::from_integer(Integer::one());
        }
    }
    for k in (1..=depth).rev() {
        let find = |q: &SurgeryPresentation, pred: &dyn Fn(&CurveSpec) -> bool| {
            q.components().iter().find(|c| pred(&c.curve)).map(|c| c.id).expect("full link")
        };
        let s1 = find(&cur, &|c| *c == CurveSpec::bing(spine(k - 1), 1));
        let s2 = find(&cur, &|c| *c.peel_whitehead().1 == spine(k));
        cur = bing_pair_rewrite(&cur, s1, s2)?;
    }
    let reduced = borromean_blow_down(&cur)?;
    let knot = reduced.components()[0]
        .curve
        .knot_type()
        .expect("Whitehead doubles of the trefoil are catalogued");
    let piece = if sign < Integer::zero() {
        ManifoldExpr::surgery(knot.mirrored(), -1)
    } else {
        ManifoldExpr::surgery(knot, 1)
    }
    .expect("nonzero");
    Ok(match &p.base {
        ManifoldExpr::Sphere => piece,
        base => ManifoldExpr::sum([base.clone(), piece]),
    })
}
