//! Coefficient rings accepted by the generic polynomial and matrix code.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed};

/// A commutative ring with exact (or, for floats, approximate) division
/// where the division is known to be exact.
///
/// Implemented for every type with the required `num-traits` surface:
/// `BigInt`, `BigRational`, `i64`, `f64`, ... The arithmetic in this crate
/// is only ever instantiated with the exact types.
pub trait Scalar: Num + Clone + Debug + FromPrimitive + std::ops::Neg<Output = Self> {
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits scalar type")
    }
}

impl<T> Scalar for T where T: Num + Clone + Debug + FromPrimitive + std::ops::Neg<Output = T> {}

/// Scalars with a sign, used where definiteness is decided.
pub trait OrderedScalar: Scalar + Signed + PartialOrd {}

impl<T> OrderedScalar for T where T: Scalar + Signed + PartialOrd {}

/// Conversion to an exact rational; the identity on `BigRational`.
pub trait ToRational {
    fn to_rational(&self) -> BigRational;
}

impl ToRational for BigRational {
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
}

impl ToRational for BigInt {
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }
}

impl ToRational for i64 {
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(*self))
    }
}
