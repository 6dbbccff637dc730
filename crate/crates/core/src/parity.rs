//! The Thue–Morse parity character.
//!
//! `epsilon(n)` is `+1` when the binary expansion of `n` has an even number of
//! ones (the class ℕ₀) and `-1` otherwise (ℕ₁). `epsilon_k` looks only at the
//! `k` lowest binary digits, so it is periodic with period `2^k`.
//!
//! `epsilon(0) = +1`: the empty digit sum is even, which keeps the splitting
//! identity `ε(x + 2^m·y) = ε(x)·ε(y)` valid at `x = 0`.

use std::fmt;
use std::ops::{Mul, Neg};

/// A value of the parity character, always `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParityValue(i8);

impl ParityValue {
    pub const PLUS: ParityValue = ParityValue(1);
    pub const MINUS: ParityValue = ParityValue(-1);

    #[inline]
    pub fn value(self) -> i8 {
        self.0
    }

    #[inline]
    pub fn as_i64(self) -> i64 {
        self.0 as i64
    }

    #[inline]
    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    /// `true` for the class ℕ₀.
    #[inline]
    pub fn is_plus(self) -> bool {
        self.0 > 0
    }
}

impl Mul for ParityValue {
    type Output = ParityValue;

    #[inline]
    fn mul(self, rhs: ParityValue) -> ParityValue {
        ParityValue(self.0 * rhs.0)
    }
}

impl Neg for ParityValue {
    type Output = ParityValue;

    #[inline]
    fn neg(self) -> ParityValue {
        ParityValue(-self.0)
    }
}

impl fmt::Display for ParityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.0)
    }
}

/// Number of ones in the binary expansion of `n`.
#[inline]
pub fn digit_sum(n: u64) -> u32 {
    n.count_ones()
}

#[inline]
pub fn epsilon(n: u64) -> ParityValue {
    if digit_sum(n) & 1 == 0 {
        ParityValue::PLUS
    } else {
        ParityValue::MINUS
    }
}

/// Parity of the `k` lowest binary digits of `n`. For `k >= 64` this is `epsilon(n)`.
#[inline]
pub fn epsilon_k(n: u64, k: u32) -> ParityValue {
    debug_assert!(k >= 1);
    epsilon(n & low_mask(k))
}

#[inline]
pub(crate) fn low_mask(k: u32) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}
