//! Dense univariate polynomials and Sylvester resultants.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::linalg::det_bareiss;
use crate::scalar::Scalar;

/// A univariate polynomial, coefficients stored from the constant term up.
/// The coefficient vector never ends in a zero.
#[derive(Clone, PartialEq, Debug)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> UniPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_int(k as i64))
                .collect(),
        )
    }

    pub fn map_coeffs<U: Scalar, F: Fn(&T) -> U>(&self, f: F) -> UniPoly<U> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }
}

/// Euclidean operations; these need division of coefficients to be exact,
/// i.e. `T` a field such as `BigRational`.
impl<T: Scalar> UniPoly<T> {
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let lc = lc.clone();
                self.map_coeffs(|c| c.clone() / lc.clone())
            }
        }
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k].clone() / lc.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = rem[idx].clone() - c.clone() * dc.clone();
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s * self + t * other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::new(vec![T::one()]), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::new(vec![T::one()]));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = |p: &Self| p.map_coeffs(|c| c.clone() / lc.clone());
                (inv(&r0), inv(&s0), inv(&t0))
            }
        }
    }

    /// Squarefree part (characteristic zero).
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }
}

/// Sylvester matrix of `f` and `g` viewed as polynomials of formal degrees
/// `m` and `n`. Missing top coefficients are zero.
pub fn sylvester_matrix<T: Scalar>(f: &UniPoly<T>, m: usize, g: &UniPoly<T>, n: usize) -> Vec<Vec<T>> {
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![T::zero(); size];
        for k in 0..=m {
            row[i + k] = f.coeff(m - k);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![T::zero(); size];
        for k in 0..=n {
            row[i + k] = g.coeff(n - k);
        }
        rows.push(row);
    }
    rows
}

/// Resultant with respect to formal degrees, i.e. the Sylvester determinant.
pub fn resultant_formal<T: Scalar>(f: &UniPoly<T>, m: usize, g: &UniPoly<T>, n: usize) -> T {
    if m + n == 0 {
        return T::one();
    }
    det_bareiss(sylvester_matrix(f, m, g, n))
}

/// Resultant of two univariate polynomials with their actual degrees.
///
/// If exactly one argument is zero the resultant is zero.
pub fn resultant_uni<T: Scalar>(f: &UniPoly<T>, g: &UniPoly<T>) -> Result<T> {
    match (f.degree(), g.degree()) {
        (None, None) => Err(Error::invalid("resultant of two zero polynomials")),
        (None, _) | (_, None) => Ok(T::zero()),
        (Some(m), Some(n)) => Ok(resultant_formal(f, m, g, n)),
    }
}

impl<'a, T: Scalar> Add<&'a UniPoly<T>> for &'a UniPoly<T> {
    type Output = UniPoly<T>;
    fn add(self, rhs: &'a UniPoly<T>) -> UniPoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a, T: Scalar> Sub<&'a UniPoly<T>> for &'a UniPoly<T> {
    type Output = UniPoly<T>;
    fn sub(self, rhs: &'a UniPoly<T>) -> UniPoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a, T: Scalar> Mul<&'a UniPoly<T>> for &'a UniPoly<T> {
    type Output = UniPoly<T>;
    fn mul(self, rhs: &'a UniPoly<T>) -> UniPoly<T> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly::new(out)
    }
}

impl<T: Scalar> Neg for &UniPoly<T> {
    type Output = UniPoly<T>;
    fn neg(self) -> UniPoly<T> {
        self.map_coeffs(|c| -c.clone())
    }
}
