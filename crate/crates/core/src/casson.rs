//! Casson invariant of `±1/n` surgeries and their connected sums.
//!
//! Iterating the surgery axiom `λ(Y_1(K)) - λ(Y) = Δ''_K(1) / 2` gives
//! `λ(S^3_{1/n}(K)) = n Δ''_K(1) / 2`. The invariant is additive under
//! connected sum and changes sign with orientation.

use num_integer::Integer as _;
use num_traits::Zero;
use thiserror::Error;

use crate::knots::{alexander, KnotSpec};
use crate::manifold::ManifoldExpr;
use crate::Integer;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CassonError {
    #[error("Δ''(1) = {value} is odd for {knot}; catalog entry is inconsistent")]
    ParityViolation { knot: String, value: Integer },
}

/// `λ(S^3_{1/n}(k))`. `n = 0` is the trivial surgery and returns 0.
pub fn casson_surgery(k: &KnotSpec, n: i64) -> Result<Integer, CassonError> {
    let second = alexander::<Integer>(k).second_derivative_at_one();
    if second.is_odd() {
        return Err(CassonError::ParityViolation { knot: k.to_string(), value: second });
    }
    Ok(Integer::from(n) * (second / 2))
}

pub fn casson_manifold(e: &ManifoldExpr) -> Result<Integer, CassonError> {
    let mut total = Integer::zero();
    e.for_each_piece(&mut |k, n, sign| {
        total += casson_surgery(k, n)? * sign;
        Ok(())
    })?;
    Ok(total)
}

/// `λ_{ab} - λ_a - λ_b`; equals `2δ(φ, ψ)` when the inputs come from
/// gluings along a Heegaard surface.
pub fn casson_defect(lab: &Integer, la: &Integer, lb: &Integer) -> Integer {
    lab - la - lb
}
