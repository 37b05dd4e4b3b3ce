//! Symbolic framed and rational surgery presentations.
//!
//! A presentation is a base homology sphere plus an ordered list of link
//! components. Components carry a construction tag ([`CurveSpec`]), an exact
//! surgery coefficient and pairwise linking numbers. Nothing is embedded:
//! rewrite moves fire on tags together with linking and framing data.
//!
//! Linking numbers of unknot-tagged components are read geometrically: an
//! unknotted component is assumed to bound a disc that meets every other
//! component `|lk|` times. Moves that would need more than that refuse to
//! fire.

mod brunnian;
mod curve;
mod io;
mod moves;

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::manifold::ManifoldExpr;
use crate::matrix::SquareMatrix;
use crate::{Integer, Rational};

pub use brunnian::{bing_pair_rewrite, borromean_blow_down, build_brunnian, reduce_brunnian};
pub use curve::{ComponentId, CurveSpec};
pub use moves::{
    annulus_pair_eliminate, blow_down, build_jlink, integerize, negative_continued_fraction,
    reduce, slam_dunk, ReduceOutcome,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurgeryError {
    #[error("no component with id {0}")]
    UnknownComponent(ComponentId),
    #[error("component {id} cannot be blown down: {reason}")]
    NotBlowdownable { id: ComponentId, reason: String },
    #[error("component {id} cannot be slam-dunked: {reason}")]
    NotSlamDunkable { id: ComponentId, reason: String },
    #[error("annulus-pair pattern mismatch: {}", .0.join("; "))]
    PatternMismatch(Vec<String>),
    #[error("not a Brunnian descriptor: {0}")]
    NotBrunnianDescriptor(String),
    #[error("invalid presentation: {0}")]
    Invalid(String),
    #[error("cannot parse presentation: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub id: ComponentId,
    pub curve: CurveSpec,
    /// Surgery coefficient relative to the Seifert framing.
    pub coeff: Rational,
    pub surface_framing: Option<Integer>,
    /// Partner component when the two cobound an annulus in the exterior of
    /// the rest of the link.
    pub annulus_with: Option<ComponentId>,
}

impl Component {
    pub fn new(id: ComponentId, curve: CurveSpec, coeff: Rational) -> Self {
        Self { id, curve, coeff, surface_framing: None, annulus_with: None }
    }

    pub fn integer_coeff(&self) -> Option<Integer> {
        self.coeff.is_integer().then(|| self.coeff.to_integer())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryPresentation {
    pub base: ManifoldExpr,
    components: Vec<Component>,
    /// Keyed by `(min id, max id)`; zero entries are not stored.
    linking: BTreeMap<(ComponentId, ComponentId), Integer>,
}

/// Linking matrix with surgery coefficients on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingMatrix {
    pub ids: Vec<ComponentId>,
    pub entries: Vec<Vec<Rational>>,
}

impl LinkingMatrix {
    pub fn is_symmetric(&self) -> bool {
        let n = self.ids.len();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn off_diagonal_zero(&self) -> bool {
        let n = self.ids.len();
        (0..n).all(|i| (0..n).all(|j| i == j || self.entries[i][j].is_zero()))
    }
}

fn key(a: ComponentId, b: ComponentId) -> (ComponentId, ComponentId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn rational(p: i64, q: i64) -> Rational {
    Ratio::new(Integer::from(p), Integer::from(q))
}

pub fn integral(p: i64) -> Rational {
    Ratio::from_integer(Integer::from(p))
}

impl Default for SurgeryPresentation {
    fn default() -> Self {
        Self::empty()
    }
}

impl SurgeryPresentation {
    pub fn empty() -> Self {
        Self::over(ManifoldExpr::Sphere)
    }

    pub fn over(base: ManifoldExpr) -> Self {
        Self { base, components: Vec::new(), linking: BTreeMap::new() }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn ids(&self) -> Vec<ComponentId> {
        self.components.iter().map(|c| c.id).collect()
    }

    fn next_id(&self) -> ComponentId {
        self.components.iter().map(|c| c.id + 1).max().unwrap_or(0)
    }

    /// Appends a component with a fresh id.
    pub fn add(&mut self, curve: CurveSpec, coeff: Rational) -> ComponentId {
        let id = self.next_id();
        self.components.push(Component::new(id, curve, coeff));
        id
    }

    pub fn push(&mut self, component: Component) -> Result<(), SurgeryError> {
        if self.get(component.id).is_some() {
            return Err(SurgeryError::Invalid(format!("duplicate id {}", component.id)));
        }
        self.components.push(component);
        Ok(())
    }

    pub fn get(&self, id: ComponentId) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn get_mut(&mut self, id: ComponentId) -> Option<&mut Component> {
        self.components.iter_mut().find(|c| c.id == id)
    }

    pub fn component(&self, id: ComponentId) -> Result<&Component, SurgeryError> {
        self.get(id).ok_or(SurgeryError::UnknownComponent(id))
    }

    pub fn linking(&self, a: ComponentId, b: ComponentId) -> Integer {
        if a == b {
            return Integer::zero();
        }
        self.linking.get(&key(a, b)).cloned().unwrap_or_else(Integer::zero)
    }

    pub fn set_linking(&mut self, a: ComponentId, b: ComponentId, v: Integer) {
        assert_ne!(a, b, "self-linking is the framing, not a linking entry");
        if v.is_zero() {
            self.linking.remove(&key(a, b));
        } else {
            self.linking.insert(key(a, b), v);
        }
    }

    pub fn set_annulus_pair(&mut self, a: ComponentId, b: ComponentId) -> Result<(), SurgeryError> {
        self.component(a)?;
        self.component(b)?;
        self.get_mut(a).unwrap().annulus_with = Some(b);
        self.get_mut(b).unwrap().annulus_with = Some(a);
        Ok(())
    }

    /// Removes a component and its linking entries; dangling references in
    /// other components' tags are left for the caller to fix.
    pub(crate) fn remove(&mut self, id: ComponentId) -> Result<Component, SurgeryError> {
        let pos = self
            .components
            .iter()
            .position(|c| c.id == id)
            .ok_or(SurgeryError::UnknownComponent(id))?;
        self.linking.retain(|(a, b), _| *a != id && *b != id);
        for c in &mut self.components {
            if c.annulus_with == Some(id) {
                c.annulus_with = None;
            }
        }
        Ok(self.components.remove(pos))
    }

    /// Components that are meridians of `id`.
    pub fn meridians_of(&self, id: ComponentId) -> Vec<ComponentId> {
        self.components
            .iter()
            .filter(|c| c.curve == CurveSpec::MeridianOf(id))
            .map(|c| c.id)
            .collect()
    }

    /// Sub-presentation on the listed ids, in presentation order.
    pub fn sublink(&self, keep: &[ComponentId]) -> Self {
        let components: Vec<Component> = self
            .components
            .iter()
            .filter(|c| keep.contains(&c.id))
            .cloned()
            .map(|mut c| {
                if c.annulus_with.is_some_and(|p| !keep.contains(&p)) {
                    c.annulus_with = None;
                }
                c
            })
            .collect();
        let linking = self
            .linking
            .iter()
            .filter(|((a, b), _)| keep.contains(a) && keep.contains(b))
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        Self { base: self.base.clone(), components, linking }
    }

    /// Checks the structural invariants: unique ids, linking entries refer
    /// to live components, meridians link their target exactly ±1 and
    /// nothing else, Bing strands are not duplicated, annulus tags are
    /// mutual.
    pub fn validate(&self) -> Result<(), SurgeryError> {
        let bad = |m: String| Err(SurgeryError::Invalid(m));
        let ids = self.ids();
        for (i, id) in ids.iter().enumerate() {
            if ids[..i].contains(id) {
                return bad(format!("duplicate id {id}"));
            }
        }
        for (a, b) in self.linking.keys() {
            if !ids.contains(a) || !ids.contains(b) {
                return bad(format!("linking entry ({a}, {b}) refers to a missing component"));
            }
        }
        for c in &self.components {
            if let CurveSpec::MeridianOf(target) = c.curve {
                if !ids.contains(&target) || target == c.id {
                    return bad(format!("component {} is a meridian of missing component {target}", c.id));
                }
                for other in &ids {
                    let lk = self.linking(c.id, *other);
                    let chained = matches!(self.get(*other).map(|o| &o.curve), Some(CurveSpec::MeridianOf(t)) if *t == c.id);
                    let ok = if *other == target || chained { lk.abs().is_one() } else { lk.is_zero() };
                    if !ok && *other != c.id {
                        return bad(format!(
                            "meridian {} links component {other} {lk} times",
                            c.id
                        ));
                    }
                }
            }
            if let Some(p) = c.annulus_with {
                if self.get(p).and_then(|q| q.annulus_with) != Some(c.id) {
                    return bad(format!("annulus tag on {} is not mutual", c.id));
                }
            }
        }
        let strands: Vec<&CurveSpec> = self
            .components
            .iter()
            .filter(|c| matches!(c.curve, CurveSpec::BingPairStrand { .. }))
            .map(|c| &c.curve)
            .collect();
        for (i, s) in strands.iter().enumerate() {
            if strands[..i].contains(s) {
                return bad(format!("Bing strand {s} appears twice"));
            }
        }
        Ok(())
    }

    pub fn linking_matrix(&self) -> LinkingMatrix {
        let ids = self.ids();
        let entries = self
            .components
            .iter()
            .map(|ci| {
                self.components
                    .iter()
                    .map(|cj| {
                        if ci.id == cj.id {
                            ci.coeff.clone()
                        } else {
                            Ratio::from_integer(self.linking(ci.id, cj.id))
                        }
                    })
                    .collect()
            })
            .collect();
        LinkingMatrix { ids, entries }
    }

    /// Integer matrix `A` with `A_ii = p_i`, `A_ij = q_i lk(i, j)` for
    /// coefficients `p_i / q_i`; `|det A|` is `|H_1|`.
    pub fn homology_matrix(&self) -> SquareMatrix<Integer> {
        let rows = self
            .components
            .iter()
            .map(|ci| {
                self.components
                    .iter()
                    .map(|cj| {
                        if ci.id == cj.id {
                            ci.coeff.numer().clone()
                        } else {
                            ci.coeff.denom() * self.linking(ci.id, cj.id)
                        }
                    })
                    .collect()
            })
            .collect();
        SquareMatrix::from_rows(rows)
    }

    /// `|H_1|` of the surgered manifold, `0` when it is infinite.
    pub fn homology_order(&self) -> Integer {
        self.homology_matrix().determinant().abs()
    }
}
