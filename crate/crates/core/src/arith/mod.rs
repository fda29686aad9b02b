//! Exact integer and rational arithmetic, factorization, and the numeric
//! helper types used by the height code.

pub mod dd;
pub mod factor;
pub mod padic;
pub mod rational;

use thiserror::Error;

pub use dd::DoubleDouble;
pub use factor::{factor, factor_u64, is_prime, is_prime_u64, sieve, Factorization, Natural};
pub use padic::{Padic, PadicField};
pub use rational::{format_rational, parse_rational, rat, rat_frac, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("cannot factor zero")]
    FactorZero,
    #[error("exponent of prime {0} must be positive")]
    ZeroExponent(Natural),
    #[error("{0} is not prime")]
    NotPrime(Natural),
    #[error("malformed rational `{0}`")]
    ParseRational(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("malformed factorization `{0}`")]
    ParseFactorization(String),
}
