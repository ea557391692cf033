//! Exact arithmetic for twisted K3 double sextics arising from (2,2)
//! divisors on P^2 x P^2 over Q.
//!
//! The pipeline derives the two double-sextic surfaces `w^2 = -1/2 det(M)`
//! from a divisor, certifies smoothness of the branch sextics, finds the
//! primes of bad reduction, evaluates the quaternion Brauer class at local
//! points through Hilbert symbols and decides whether the class gives a
//! Brauer-Manin obstruction.
//!
//! Polynomial and matrix code is generic over the coefficient ring (see
//! [`Scalar`]); the aliases below fix the exact instantiations used
//! throughout.

pub mod brauer;
pub mod cli;
pub mod divisor;
pub mod error;
pub mod local;
pub mod ntheory;
pub mod pipeline;
pub mod points;
pub mod poly;
pub mod scalar;
pub mod smoothness;
pub mod sod;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;
/// Exact rational number in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;
/// Ternary form over Q.
pub type QPoly = poly::HomPoly<Rational>;
/// Ternary form over Z.
pub type ZPoly = poly::HomPoly<Integer>;
/// Univariate polynomial over Z.
pub type ZUniPoly = poly::UniPoly<Integer>;
/// Univariate polynomial over Q.
pub type QUniPoly = poly::UniPoly<Rational>;
