//! Rewrite moves on presentations. Every move returns a new presentation
//! and preserves the surgered manifold, hence `|H_1|`.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::brunnian::{is_brunnian_descriptor, reduce_brunnian};
use super::{integral, ComponentId, CurveSpec, SurgeryError, SurgeryPresentation};
use crate::knots::KnotSpec;
use crate::manifold::ManifoldExpr;
use crate::{Integer, Rational};

/// Expansion `x = a_1 - 1/(a_2 - 1/(a_3 - ...))` with each `a_i` the
/// nearest integer to the current tail, so `|tail| >= 2` after the first
/// term and the expansion terminates. For `s - 1/n` with `|n| >= 2` this is
/// exactly `[s, n]`.
pub fn negative_continued_fraction(x: &Rational) -> Vec<Integer> {
    let mut out = Vec::new();
    let mut cur = x.clone();
    loop {
        // Nearest integer, ties rounded down.
        let half = Ratio::new(Integer::one(), Integer::from(2));
        let a = (&cur + &half).floor().to_integer();
        let rem = Ratio::from_integer(a.clone()) - &cur;
        out.push(a);
        if rem.is_zero() {
            return out;
        }
        cur = rem.recip();
    }
}

/// Replaces every non-integral coefficient by an integer framing plus a
/// chain of meridians (the earring form for `s - 1/n`).
pub fn integerize(p: &SurgeryPresentation) -> SurgeryPresentation {
    let mut out = p.clone();
    for id in p.ids() {
        let coeff = p.component(id).unwrap().coeff.clone();
        if coeff.is_integer() {
            continue;
        }
        let cf = negative_continued_fraction(&coeff);
        out.get_mut(id).unwrap().coeff = Ratio::from_integer(cf[0].clone());
        let mut parent = id;
        for a in &cf[1..] {
            let m = out.add(CurveSpec::MeridianOf(parent), Ratio::from_integer(a.clone()));
            out.set_linking(parent, m, Integer::one());
            parent = m;
        }
    }
    out
}

/// Absorbs a meridian `m` of an integrally framed component `c`: framing
/// `s` on `c` and coefficient `r` on `m` become `s - 1/r` on `c`.
pub fn slam_dunk(
    p: &SurgeryPresentation,
    meridian: ComponentId,
) -> Result<SurgeryPresentation, SurgeryError> {
    let fail = |reason: &str| SurgeryError::NotSlamDunkable { id: meridian, reason: reason.into() };
    let m = p.component(meridian)?;
    let CurveSpec::MeridianOf(target) = m.curve else {
        return Err(fail("not tagged as a meridian"));
    };
    let c = p.component(target)?;
    let s = c.integer_coeff().ok_or_else(|| fail("target framing is not integral"))?;
    if m.coeff.is_zero() {
        return Err(fail("meridian coefficient 0 would give 1/0 on the target"));
    }
    if !p.meridians_of(meridian).is_empty() {
        return Err(fail("meridian carries its own meridians; absorb those first"));
    }
    for other in p.ids() {
        if other == meridian {
            continue;
        }
        let lk = p.linking(meridian, other);
        let expected_unit = other == target;
        if (expected_unit && !lk.abs().is_one()) || (!expected_unit && !lk.is_zero()) {
            return Err(fail("meridian must link its target once and nothing else"));
        }
    }
    let r = m.coeff.clone();
    let mut out = p.clone();
    out.remove(meridian)?;
    out.get_mut(target).unwrap().coeff = Ratio::from_integer(s) - r.recip();
    Ok(out)
}

/// Blows down an unknotted `±1`-framed component. With `e = ±1` and
/// `a_j = lk(j, id)`: coefficients drop by `e a_j^2`, linkings by
/// `e a_j a_k`.
pub fn blow_down(
    p: &SurgeryPresentation,
    id: ComponentId,
) -> Result<SurgeryPresentation, SurgeryError> {
    let fail = |reason: &str| SurgeryError::NotBlowdownable { id, reason: reason.into() };
    let u = p.component(id)?;
    if !u.curve.is_unknotted() {
        return Err(fail("component is not tagged unknotted"));
    }
    let eps = match u.integer_coeff() {
        Some(v) if v.abs().is_one() => v,
        _ => return Err(fail("coefficient is not ±1")),
    };
    let was_meridian_of = match u.curve {
        CurveSpec::MeridianOf(t) => Some(t),
        _ => None,
    };
    let mut out = p.clone();
    out.remove(id)?;
    let rest = out.ids();
    let lk: Vec<Integer> = rest.iter().map(|&j| p.linking(j, id)).collect();
    for (i, &j) in rest.iter().enumerate() {
        let a = &lk[i];
        if a.is_zero() {
            continue;
        }
        let comp = out.get_mut(j).unwrap();
        comp.coeff = comp.coeff.clone() - Ratio::from_integer(&eps * a * a);
        // Twisting along a meridian disc leaves the target's knot type alone.
        if Some(j) != was_meridian_of && !matches!(comp.curve, CurveSpec::MeridianOf(_)) {
            comp.curve = CurveSpec::Twisted(Box::new(comp.curve.clone()));
        }
        for (k_idx, &k) in rest.iter().enumerate().skip(i + 1) {
            let b = &lk[k_idx];
            if b.is_zero() {
                continue;
            }
            let v = out.linking(j, k) - &eps * a * b;
            out.set_linking(j, k, v);
        }
    }
    // Meridians of the removed unknot become plain unknots.
    for comp in out.components.iter_mut() {
        if comp.curve == CurveSpec::MeridianOf(id) {
            comp.curve = CurveSpec::Knot(KnotSpec::unknot());
        }
    }
    Ok(out)
}

/// Removes a pair of components cobounding an annulus, together with their
/// earrings, when the framings follow the pattern `(l, l)` with earrings
/// `(n, -n)`. Linking numbers are read with both strands oriented in
/// parallel, so the pair links `l` times (`-l` with the annulus boundary
/// orientation).
pub fn annulus_pair_eliminate(
    p: &SurgeryPresentation,
    pair: (ComponentId, ComponentId),
) -> Result<SurgeryPresentation, SurgeryError> {
    let (a, b) = pair;
    let ca = p.component(a)?;
    let cb = p.component(b)?;
    let mut problems = Vec::new();
    if ca.annulus_with != Some(b) || cb.annulus_with != Some(a) {
        problems.push(format!("components {a} and {b} are not tagged as an annulus pair"));
    }
    let ell = match (ca.integer_coeff(), cb.integer_coeff()) {
        (Some(x), Some(y)) if x == y => Some(x),
        _ => {
            problems.push(format!(
                "framings {} and {} are not equal integers",
                ca.coeff, cb.coeff
            ));
            None
        }
    };
    if let Some(ell) = &ell {
        let lk = p.linking(a, b);
        if &lk != ell {
            problems.push(format!("pair links {lk} times, framing is {ell}"));
        }
    }
    let ma = p.meridians_of(a);
    let mb = p.meridians_of(b);
    if ma.len() != 1 || mb.len() != 1 {
        problems.push(format!(
            "expected one earring on each strand, found {} and {}",
            ma.len(),
            mb.len()
        ));
        return Err(SurgeryError::PatternMismatch(problems));
    }
    let (ea, eb) = (ma[0], mb[0]);
    let na = &p.component(ea)?.coeff;
    let nb = &p.component(eb)?.coeff;
    if !na.is_integer() || !nb.is_integer() || (na + nb) != Rational::zero() {
        problems.push(format!("earring coefficients ({na}, {nb}) are not (n, -n)"));
    }
    let block = [a, b, ea, eb];
    for (earring, strand) in [(ea, a), (eb, b)] {
        if !p.meridians_of(earring).is_empty() {
            problems.push(format!("earring {earring} carries its own meridian"));
        }
        for other in p.ids() {
            if other == earring {
                continue;
            }
            let lk = p.linking(earring, other);
            let ok = if other == strand { lk.abs().is_one() } else { lk.is_zero() };
            if !ok {
                problems.push(format!("earring {earring} links component {other} {lk} times"));
            }
        }
    }
    for other in p.ids().into_iter().filter(|o| !block.contains(o)) {
        if p.linking(other, a) != p.linking(other, b) {
            problems.push(format!(
                "component {other} links the strands {} and {} times; the annulus must avoid it",
                p.linking(other, a),
                p.linking(other, b)
            ));
        }
    }
    if !problems.is_empty() {
        return Err(SurgeryError::PatternMismatch(problems));
    }
    let mut out = p.clone();
    for id in block {
        out.remove(id)?;
    }
    Ok(out)
}

/// Cables each component of a link with pairwise linking `etas` by the
/// `(2, 2 l_i)` pattern and adds an earring to every strand. Strand `1`
/// carries earring coefficient `n_i`, strand `2` carries `-n_i`.
pub fn build_jlink(
    etas: &[Vec<i64>],
    ells: &[i64],
    ns: &[i64],
) -> Result<SurgeryPresentation, SurgeryError> {
    let k = ells.len();
    if ns.len() != k || etas.len() != k || etas.iter().any(|row| row.len() != k) {
        return Err(SurgeryError::Invalid(format!(
            "dimension mismatch: {} linking rows, {} cable twists, {} earring coefficients",
            etas.len(),
            k,
            ns.len()
        )));
    }
    for i in 0..k {
        for j in 0..i {
            if etas[i][j] != etas[j][i] {
                return Err(SurgeryError::Invalid(format!(
                    "linking matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    let mut p = SurgeryPresentation::empty();
    let mut strands = Vec::with_capacity(k);
    for i in 0..k {
        let ell = ells[i];
        let curve = |strand| CurveSpec::CableStrand { companion: KnotSpec::unknot(), twist: ell, strand };
        let s1 = p.add(curve(1), integral(ell));
        let s2 = p.add(curve(2), integral(ell));
        p.set_linking(s1, s2, Integer::from(ell));
        p.set_annulus_pair(s1, s2)?;
        for (strand, n) in [(s1, ns[i]), (s2, -ns[i])] {
            let e = p.add(CurveSpec::MeridianOf(strand), integral(n));
            p.set_linking(strand, e, Integer::one());
        }
        strands.push((s1, s2));
    }
    for i in 0..k {
        for j in 0..i {
            let eta = Integer::from(etas[i][j]);
            for a in [strands[i].0, strands[i].1] {
                for b in [strands[j].0, strands[j].1] {
                    p.set_linking(a, b, eta.clone());
                }
            }
        }
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReduceOutcome {
    Manifold { result: ManifoldExpr, log: Vec<String> },
    Stuck { remaining: SurgeryPresentation, reason: String, log: Vec<String> },
}

/// Fixed-strategy reduction: absorb meridians not attached to annulus
/// pairs, eliminate annulus pairs, blow down `±1` unknots, then read off a
/// manifold if what remains is split unknots with `1/n` coefficients plus
/// at most one knotted `±1/n` component. Presentations built from Bing
/// doubles of the Borromean rings go through [`reduce_brunnian`].
pub fn reduce(p: &SurgeryPresentation) -> Result<ReduceOutcome, SurgeryError> {
    p.validate()?;
    let mut log = Vec::new();
    if is_brunnian_descriptor(p) {
        let result = reduce_brunnian(p)?;
        log.push(format!("Brunnian reduction: {result}"));
        return Ok(ReduceOutcome::Manifold { result, log });
    }
    let mut cur = p.clone();

    // Meridians, deepest first.
    loop {
        let candidate = cur.components().iter().find_map(|c| match c.curve {
            CurveSpec::MeridianOf(t)
                if cur.meridians_of(c.id).is_empty()
                    && cur.get(t).is_some_and(|tc| tc.annulus_with.is_none()) =>
            {
                slam_dunk(&cur, c.id).ok().map(|next| (c.id, t, next))
            }
            _ => None,
        });
        match candidate {
            Some((m, t, next)) => {
                log.push(format!("slam dunk meridian {m} into {t}"));
                cur = next;
            }
            None => break,
        }
    }

    // Annulus pairs.
    loop {
        let pair = cur
            .components()
            .iter()
            .find_map(|c| c.annulus_with.filter(|&b| c.id < b).map(|b| (c.id, b)));
        let Some(pair) = pair else { break };
        cur = annulus_pair_eliminate(&cur, pair)?;
        log.push(format!("eliminate annulus pair {pair:?} with earrings"));
    }

    // Blow-downs of ±1 unknots.
    loop {
        let target = cur.components().iter().find_map(|c| {
            (c.curve.is_unknotted() && c.coeff.abs().is_one() && c.coeff.is_integer())
                .then_some(c.id)
        });
        let Some(id) = target else { break };
        cur = blow_down(&cur, id)?;
        log.push(format!("blow down {id}"));
        // A blow-down can turn a meridian back into a slam-dunkable shape.
        while let Some((m, next)) = cur.components().iter().find_map(|c| match c.curve {
            CurveSpec::MeridianOf(_) if cur.meridians_of(c.id).is_empty() => {
                slam_dunk(&cur, c.id).ok().map(|n| (c.id, n))
            }
            _ => None,
        }) {
            log.push(format!("slam dunk meridian {m}"));
            cur = next;
        }
    }

    let mut knotted = Vec::new();
    for c in cur.components() {
        let unit_fraction = c.coeff.numer().abs().is_one();
        let unlinked = cur.ids().iter().all(|&o| o == c.id || cur.linking(c.id, o).is_zero());
        if !unit_fraction || !unlinked {
            return Ok(ReduceOutcome::Stuck {
                reason: format!("component {} ({}) with coefficient {} is not a split 1/n surgery", c.id, c.curve, c.coeff),
                remaining: cur,
                log,
            });
        }
        let is_split_unknot = matches!(c.curve, CurveSpec::UnlinkComponent)
            || c.curve.knot_type().is_some_and(|k| k == KnotSpec::unknot());
        if !is_split_unknot {
            knotted.push(c.clone());
        }
    }
    match knotted.as_slice() {
        [] => Ok(ReduceOutcome::Manifold { result: cur.base.clone(), log }),
        [c] => {
            let Some(knot) = c.curve.knot_type() else {
                return Ok(ReduceOutcome::Stuck {
                    reason: format!("component {} ({}) has no catalog knot type", c.id, c.curve),
                    remaining: cur.clone(),
                    log,
                });
            };
            let n = c.coeff.denom() * c.coeff.numer().signum();
            let n = i64::try_from(&n).map_err(|_| SurgeryError::Invalid("coefficient too large".into()))?;
            let piece = ManifoldExpr::surgery(knot, n).expect("denominator is nonzero");
            let result = match &cur.base {
                ManifoldExpr::Sphere => piece,
                base => ManifoldExpr::sum([base.clone(), piece]),
            };
            log.push(format!("read off {result}"));
            Ok(ReduceOutcome::Manifold { result, log })
        }
        _ => Ok(ReduceOutcome::Stuck {
            reason: format!(
                "{} knotted components remain; their splitting is not determined by the tags",
                knotted.len()
            ),
            remaining: cur,
            log,
        }),
    }
}
