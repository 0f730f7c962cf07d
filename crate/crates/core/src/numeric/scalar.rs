use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact signed integer type usable as matrix entry.
///
/// Blanket-implemented for the primitive signed integers and for
/// [`num_bigint::BigInt`]. The fixed-width types overflow silently on large
/// inputs; the crate-level aliases use `BigInt`.
pub trait Scalar:
    Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync
{
    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("scalar type cannot represent i64 value")
    }
}

impl<T> Scalar for T where
    T: Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync
{
}
