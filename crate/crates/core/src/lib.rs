//! Exact surgery calculus for integer homology spheres.

pub mod casson;
pub mod certify;
pub mod dfloer;
pub mod knots;
pub mod laurent;
pub mod manifold;
pub mod matrix;
pub mod scalar;
pub mod selftest;
pub mod surgery;
pub mod torelli;

pub use knots::{KnotFamily, KnotSpec};
pub use laurent::LaurentPoly;
pub use manifold::ManifoldExpr;
pub use matrix::SquareMatrix;
pub use scalar::Exact;

/// Arbitrary-precision integer used by every concrete API.
pub type Integer = num_bigint::BigInt;
/// Exact rational in lowest terms, sign on the numerator.
pub type Rational = num_rational::BigRational;
/// Integer Laurent polynomial over [`Integer`].
pub type Poly = LaurentPoly<Integer>;
/// Square matrix over [`Integer`].
pub type IntMatrix = SquareMatrix<Integer>;
