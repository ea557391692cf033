//! Local fields Q_p and R: valuations, squares, Hensel square roots,
//! Hilbert symbols and local invariants of quaternion classes.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ntheory::{inv_mod, is_probable_prime, jacobi, split_valuation, valuation_int};
use crate::poly::Fp;

/// Default number of base-p digits for Hensel lifts.
pub const DEFAULT_PRECISION: u32 = 24;

/// A place of Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(BigUint),
    Real,
}

impl Place {
    /// A finite place; the argument must be a (probable) prime.
    pub fn finite(p: impl Into<BigUint>) -> Result<Place> {
        let p = p.into();
        if !is_probable_prime(&p, 64) {
            return Err(Error::invalid(format!("{} is not prime", p)));
        }
        Ok(Place::Finite(p))
    }

    pub fn prime(&self) -> Option<&BigUint> {
        match self {
            Place::Finite(p) => Some(p),
            Place::Real => None,
        }
    }

    pub fn is_two(&self) -> bool {
        matches!(self, Place::Finite(p) if p == &BigUint::from(2u32))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{}", p),
            Place::Real => f.write_str("real"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "real" | "inf" | "infinity" | "R" => Ok(Place::Real),
            t => {
                let p: BigUint = t.parse().map_err(|_| Error::invalid(format!("bad place '{}'", t)))?;
                Place::finite(p)
            }
        }
    }
}

/// An element of {0, 1/2} in Q/Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct LocalInvariant {
    half: bool,
}

impl LocalInvariant {
    pub const ZERO: LocalInvariant = LocalInvariant { half: false };
    pub const HALF: LocalInvariant = LocalInvariant { half: true };

    pub fn is_zero(&self) -> bool {
        !self.half
    }

    /// Numerator over 2.
    pub fn numerator(&self) -> u8 {
        self.half as u8
    }
}

impl Add for LocalInvariant {
    type Output = LocalInvariant;
    // addition in Z/2
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: LocalInvariant) -> LocalInvariant {
        LocalInvariant {
            half: self.half ^ rhs.half,
        }
    }
}

impl std::iter::Sum for LocalInvariant {
    fn sum<I: Iterator<Item = LocalInvariant>>(iter: I) -> LocalInvariant {
        iter.fold(LocalInvariant::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for LocalInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.half { "1/2" } else { "0" })
    }
}

/// p-adic valuation with the +infinity of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{}", v),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

pub fn padic_valuation(r: &BigRational, p: &BigUint) -> Valuation {
    if r.is_zero() {
        return Valuation::Infinity;
    }
    Valuation::Finite(valuation_int(r.numer(), p) as i64 - valuation_int(r.denom(), p) as i64)
}

/// Integer in the same square class as the nonzero rational `r`.
fn square_class_rep(r: &BigRational) -> BigInt {
    r.numer() * r.denom()
}

pub fn is_square_local(r: &BigRational, place: &Place) -> Result<bool> {
    if r.is_zero() {
        return Err(Error::invalid("squareness of zero"));
    }
    let n = square_class_rep(r);
    Ok(match place {
        Place::Real => n.is_positive(),
        Place::Finite(p) => is_square_int_at(&n, p),
    })
}

fn is_square_int_at(n: &BigInt, p: &BigUint) -> bool {
    let (v, u) = split_valuation(n, p);
    if v % 2 == 1 {
        return false;
    }
    if p == &BigUint::from(2u32) {
        u.mod_floor(&BigInt::from(8)) == BigInt::one()
    } else {
        jacobi(&u, &BigInt::from(p.clone())) == 1
    }
}

/// A p-adic square root `residue * p^valuation_half`, known modulo
/// `p^precision` in its unit part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicSqrt {
    pub prime: BigUint,
    pub precision: u32,
    pub residue: BigUint,
    pub valuation_half: i64,
}

impl PAdicSqrt {
    /// Checks `residue^2 == target / p^(2 * valuation_half)` modulo
    /// `p^precision`.
    pub fn verify(&self, target: &BigRational) -> bool {
        let pk = BigInt::from(self.prime.pow(self.precision));
        let p = BigInt::from(self.prime.clone());
        let shift = p.pow(2 * self.valuation_half.unsigned_abs() as u32);
        let unit = if self.valuation_half >= 0 {
            target / BigRational::from_integer(shift)
        } else {
            target * BigRational::from_integer(shift)
        };
        if !unit.denom().gcd(&p).is_one() || unit.numer().gcd(&p) != BigInt::one() {
            return false;
        }
        let u = (unit.numer() * inv_mod(unit.denom(), &pk)).mod_floor(&pk);
        let s = BigInt::from(self.residue.clone());
        (&s * &s).mod_floor(&pk) == u
    }
}

/// Square root in Q_p to `precision` digits by Newton/Hensel lifting.
pub fn hensel_sqrt(r: &BigRational, prime: &BigUint, precision: u32) -> Result<PAdicSqrt> {
    let place = Place::Finite(prime.clone());
    if r.is_zero() || !is_square_local(r, &place)? {
        return Err(Error::NotASquare {
            prime: prime.to_string(),
        });
    }
    let vn = valuation_int(r.numer(), prime) as i64;
    let vd = valuation_int(r.denom(), prime) as i64;
    let half = (vn - vd) / 2;
    let p = BigInt::from(prime.clone());
    let num = r.numer() / p.pow(vn as u32);
    let den = r.denom() / p.pow(vd as u32);
    let k = precision.max(1);
    let pk = p.pow(k);
    let unit = (&num * inv_mod(&den, &pk)).mod_floor(&pk);

    let residue = if prime == &BigUint::from(2u32) {
        // s^2 = u mod 2^j  =>  s or s + 2^(j-1) works mod 2^(j+1), for j >= 3.
        let mut s = BigInt::one();
        for j in 3..k {
            let m = BigInt::one() << (j + 1);
            if (&s * &s - &unit).mod_floor(&m) != BigInt::zero() {
                s += BigInt::one() << (j - 1);
            }
        }
        s.mod_floor(&pk)
    } else {
        let field = Fp::new(prime.clone());
        let seed = field.sqrt(&field.reduce_int(&unit)).expect("unit part is a residue");
        let mut s = BigInt::from(seed);
        let mut prec = 1u32;
        while prec < k {
            prec = (2 * prec).min(k);
            let m = p.pow(prec);
            let f = (&s * &s - &unit).mod_floor(&m);
            let df = (BigInt::from(2) * &s).mod_floor(&m);
            s = (&s - f * inv_mod(&df, &m)).mod_floor(&m);
        }
        s
    };
    let out = PAdicSqrt {
        prime: prime.clone(),
        precision: k,
        residue: residue.to_biguint().expect("reduced residue"),
        valuation_half: half,
    };
    debug_assert!(out.verify(r));
    Ok(out)
}

/// The Hilbert symbol `(a, b)_v` as +1 or -1.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::invalid("Hilbert symbol of zero"));
    }
    let a = square_class_rep(a);
    let b = square_class_rep(b);
    Ok(match place {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Finite(p) => hilbert_int(&a, &b, p),
    })
}

fn hilbert_int(a: &BigInt, b: &BigInt, p: &BigUint) -> i8 {
    let (alpha, u) = split_valuation(a, p);
    let (beta, v) = split_valuation(b, p);
    if p == &BigUint::from(2u32) {
        let eight = BigInt::from(8);
        let u8_ = u.mod_floor(&eight);
        let v8 = v.mod_floor(&eight);
        let eps = |x: &BigInt| -> u64 {
            if x == &BigInt::from(3) || x == &BigInt::from(7) {
                1
            } else {
                0
            }
        };
        let omega = |x: &BigInt| -> u64 {
            if x == &BigInt::from(3) || x == &BigInt::from(5) {
                1
            } else {
                0
            }
        };
        let e = eps(&u8_) * eps(&v8) + alpha * omega(&v8) + beta * omega(&u8_);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let pi = BigInt::from(p.clone());
        let eps_p = ((p - 1u32) >> 1u32).is_odd() as u64;
        let mut s: i32 = if (alpha * beta * eps_p) % 2 == 1 { -1 } else { 1 };
        if beta % 2 == 1 {
            s *= jacobi(&u, &pi);
        }
        if alpha % 2 == 1 {
            s *= jacobi(&v, &pi);
        }
        s as i8
    }
}

pub fn invariant_of_symbol(s: i8) -> LocalInvariant {
    if s == 1 {
        LocalInvariant::ZERO
    } else {
        LocalInvariant::HALF
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn fin(p: u32) -> Place {
        Place::Finite(BigUint::from(p))
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(padic_valuation(&q(357008), &BigUint::from(2u32)), Valuation::Finite(4));
        assert_eq!(padic_valuation(&q(-5), &BigUint::from(2u32)), Valuation::Finite(0));
        assert_eq!(padic_valuation(&q(0), &BigUint::from(7u32)), Valuation::Infinity);
        let r = BigRational::new(BigInt::from(3), BigInt::from(50));
        assert_eq!(padic_valuation(&r, &BigUint::from(5u32)), Valuation::Finite(-2));
    }

    #[test]
    fn squares() {
        assert!(is_square_local(&q(357008), &fin(2)).unwrap());
        assert!(is_square_local(&q(5204), &Place::Real).unwrap());
        assert!(!is_square_local(&q(3), &fin(2)).unwrap());
        assert!(!is_square_local(&q(2), &fin(5)).unwrap());
        assert!(is_square_local(&BigRational::new(4.into(), 9.into()), &fin(3)).unwrap());
        assert!(is_square_local(&q(0), &fin(3)).is_err());
    }

    #[test]
    fn hensel_examples() {
        let s = hensel_sqrt(&q(4), &BigUint::from(5u32), 3).unwrap();
        assert!(s.residue == BigUint::from(2u32) || s.residue == BigUint::from(123u32));
        assert!(matches!(
            hensel_sqrt(&q(2), &BigUint::from(5u32), 3),
            Err(Error::NotASquare { .. })
        ));
        let t = hensel_sqrt(&q(357008), &BigUint::from(2u32), 20).unwrap();
        assert_eq!(t.valuation_half, 2);
        let s: BigInt = BigInt::from(t.residue.clone()) * 4;
        let diff: BigInt = &s * &s - BigInt::from(357008);
        assert_eq!(diff.mod_floor(&(BigInt::one() << 24u32)), BigInt::zero());
        assert!(t.verify(&q(357008)));
    }

    #[test]
    fn hensel_with_denominator() {
        let r = BigRational::new(BigInt::from(2), BigInt::from(49));
        let s = hensel_sqrt(&r, &BigUint::from(7u32), 10).unwrap();
        assert_eq!(s.valuation_half, -1);
        assert!(s.verify(&r));
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_symbol(&q(3), &q(3), &fin(2)).unwrap(), -1);
        assert_eq!(
            invariant_of_symbol(hilbert_symbol(&q(3), &q(3), &fin(2)).unwrap()),
            LocalInvariant::HALF
        );
        for place in [fin(2), fin(3), fin(5), Place::Real] {
            assert_eq!(hilbert_symbol(&q(1), &q(-17), &place).unwrap(), 1);
        }
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), &Place::Real).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), &fin(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), &fin(3)).unwrap(), 1);
        assert!(hilbert_symbol(&q(0), &q(1), &fin(3)).is_err());
    }

    #[test]
    fn invariants() {
        assert_eq!(invariant_of_symbol(1), LocalInvariant::ZERO);
        assert_eq!(invariant_of_symbol(-1), LocalInvariant::HALF);
        assert_eq!(LocalInvariant::HALF + LocalInvariant::HALF, LocalInvariant::ZERO);
        assert_eq!(LocalInvariant::HALF.to_string(), "1/2");
    }

    #[test]
    fn place_parsing() {
        assert_eq!("real".parse::<Place>().unwrap(), Place::Real);
        assert_eq!("7".parse::<Place>().unwrap(), fin(7));
        assert!("9".parse::<Place>().is_err());
    }
}
