//! Exact polynomial arithmetic: ternary forms, univariate polynomials,
//! Sylvester resultants and reduction modulo primes.

pub mod hom;
pub mod linalg;
pub mod modp;
pub mod parse;
pub mod tower;
pub mod uni;

pub use hom::{HomPoly, Monomial};
pub use linalg::{det_bareiss, leading_principal_minors};
pub use modp::{reduce_int_mod_p, reduce_mod_p, Fp, PolyModP, UniModP};
pub use parse::parse_hompoly;
pub use tower::{split_gcd, split_gcd_all, FieldPoly, Tower};
pub use uni::{resultant_formal, resultant_uni, UniPoly};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};

/// Clears denominators: returns an integral form if every coefficient is
/// an integer.
pub fn to_integral(p: &HomPoly<BigRational>, what: &str) -> Result<HomPoly<BigInt>> {
    if p.terms().any(|(_, c)| !c.denom().is_one()) {
        return Err(Error::IntegralityViolation(what.to_string()));
    }
    Ok(p.map_coeffs(|c| c.numer().clone()))
}

pub fn to_rational(p: &HomPoly<BigInt>) -> HomPoly<BigRational> {
    p.map_coeffs(|c| BigRational::from_integer(c.clone()))
}
