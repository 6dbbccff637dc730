//! Verification library for the Thue–Morse parity character, its exponential
//! sums over primes, and ternary Goldbach counts restricted to primes with an
//! even number of binary ones.

pub mod arith;
pub mod bounds;
pub mod constants;
pub mod error;
pub mod expsum;
pub mod fixtures;
pub mod goldbach;
pub mod parity;
pub mod sampling;
pub mod spectrum;

pub use error::{Error, Result};
pub use expsum::ComplexAmplitude;
pub use parity::{digit_sum, epsilon, epsilon_k, ParityValue};
