//! Exact continued-fraction machinery for `√f`, polynomial solutions of
//! Pell's equation, and fundamental units of real quadratic fields.
//!
//! The algebraic modules are generic over an exact integer scalar
//! ([`scalar::Int`]); the aliases below fix the arbitrary-precision
//! instantiation that the rest of the crate and the CLI use.

pub mod contfrac;
pub mod error;
pub mod factor;
pub mod families;
pub mod pell;
pub mod poly;
pub mod quadfield;
pub mod scalar;
pub mod scan;

pub use error::{Error, Result};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Periodic expansion of `√f` over arbitrary-precision integers.
pub type Expansion = contfrac::SurdExpansion<BigInt>;
/// Convergent `A_i / B_i` over arbitrary-precision integers.
pub type Convergent = contfrac::ConvergentPair<BigInt>;
/// Pell solution over arbitrary-precision integers.
pub type Solution = pell::PellSolution<BigInt>;
/// Integer polynomial in `t`.
pub type IntPoly = poly::Polynomial<BigInt>;
/// Rational polynomial in `t`.
pub type RatPoly = poly::Polynomial<BigRational>;
/// Family instance over arbitrary-precision integers.
pub type Instance = families::FamilyInstance<BigInt>;
/// Predicted continued fraction pattern over arbitrary-precision integers.
pub type Pattern = families::PredictedPattern<BigInt>;
