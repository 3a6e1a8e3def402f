//! Scalar abstraction for counter and weight values.
//!
//! Counter values, block decrements/increments and level weights grow like
//! 2^(n(n+1)/2), so the default scalar is [`crate::BigNat`]. Everything is
//! generic over [`Nat`] so that small experiments (and the hot letter-level
//! cross-checks) can run on plain `u64`.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Num, ToPrimitive};

/// Unsigned scalar used for counters and weights: `u32`/`u64`/`usize` or
/// `BigUint`. Arithmetic goes through the checked operations; on a
/// fixed-width scalar an overflow is a caller error and panics.
pub trait Nat:
    Clone
    + Ord
    + Hash
    + Debug
    + Display
    + Num
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
{
}

impl<T> Nat for T where
    T: Clone
        + Ord
        + Hash
        + Debug
        + Display
        + Num
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
{
}

/// 2^n in the chosen scalar.
pub fn two_pow<T: Nat>(n: usize) -> T {
    let two = T::one() + T::one();
    let mut p = T::one();
    for _ in 0..n {
        p = p.checked_mul(&two).expect("scalar overflow computing 2^n");
    }
    p
}

/// Lift a small machine integer into the scalar.
pub fn from_u64<T: Nat>(x: u64) -> T {
    T::from_u64(x).expect("scalar cannot represent value")
}

/// Parse a decimal string into the scalar (the wire format for counters).
pub fn parse_decimal<T: Nat>(s: &str) -> Result<T, String> {
    T::from_str_radix(s, 10).map_err(|_| format!("invalid decimal integer {s:?}"))
}
