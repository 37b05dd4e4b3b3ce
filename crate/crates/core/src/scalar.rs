//! Exact scalar types.
//!
//! Every numeric routine in this crate works over an exact integer ring.
//! The [`Exact`] trait collects what the generic code needs; it is
//! implemented for every type that already satisfies the `num` traits, so
//! `i64`, `i128` and `BigInt` all qualify.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact, signed integer ring element.
pub trait Exact:
    Clone + Debug + Display + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
    /// Lifts a machine integer. Panics only if `T` cannot hold an `i64`,
    /// which none of the supported instantiations do.
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("scalar type cannot represent i64")
    }
}

impl<T> Exact for T where
    T: Clone + Debug + Display + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
}

/// Ceiling of `a / b` for `b > 0`.
pub fn ceil_div<T: Exact>(a: &T, b: &T) -> T {
    a.div_ceil(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn ceil_div_rounds_up_for_both_signs() {
        assert_eq!(ceil_div(&7i64, &2), 4);
        assert_eq!(ceil_div(&8i64, &2), 4);
        assert_eq!(ceil_div(&-7i64, &2), -3);
        assert_eq!(ceil_div(&BigInt::from(0), &BigInt::from(3)), BigInt::from(0));
    }
}
