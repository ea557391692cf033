//! Arithmetic modulo a prime: residues, reduced ternary forms and
//! univariate polynomials over F_p with root finding.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::hom::{HomPoly, Monomial};

/// The prime field F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fp {
    p: BigUint,
}

impl Fp {
    pub fn new(p: BigUint) -> Self {
        assert!(p >= BigUint::from(2u32), "modulus must be at least 2");
        Fp { p }
    }

    pub fn from_u64(p: u64) -> Self {
        Self::new(BigUint::from(p))
    }

    pub fn modulus(&self) -> &BigUint {
        &self.p
    }

    pub fn reduce_int(&self, n: &BigInt) -> BigUint {
        let p = BigInt::from(self.p.clone());
        n.mod_floor(&p).to_biguint().expect("non-negative residue")
    }

    /// Reduces a rational whose denominator is a unit mod p.
    pub fn reduce_rational(&self, r: &BigRational) -> Result<BigUint> {
        let den = self.reduce_int(r.denom());
        if den.is_zero() {
            return Err(Error::NotPIntegral {
                prime: self.p.to_string(),
            });
        }
        let num = self.reduce_int(r.numer());
        Ok(self.mul(&num, &self.inv(&den)))
    }

    pub fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.p {
            s - &self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.p - (b - a)
        }
    }

    pub fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.p - a
        }
    }

    pub fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.p
    }

    pub fn pow(&self, a: &BigUint, e: &BigUint) -> BigUint {
        a.modpow(e, &self.p)
    }

    /// Inverse by Fermat; `a` must be nonzero.
    pub fn inv(&self, a: &BigUint) -> BigUint {
        debug_assert!(!a.is_zero());
        a.modpow(&(&self.p - 2u32), &self.p)
    }

    /// Quadratic character: 0, 1 or -1.
    pub fn legendre(&self, a: &BigUint) -> i32 {
        if a.is_zero() {
            return 0;
        }
        if self.p == BigUint::from(2u32) {
            return 1;
        }
        let e = (&self.p - 1u32) >> 1;
        if self.pow(a, &e).is_one() {
            1
        } else {
            -1
        }
    }

    /// A square root by Tonelli-Shanks, if one exists.
    pub fn sqrt(&self, a: &BigUint) -> Option<BigUint> {
        let a = a % &self.p;
        if a.is_zero() {
            return Some(a);
        }
        if self.p == BigUint::from(2u32) {
            return Some(a);
        }
        if self.legendre(&a) != 1 {
            return None;
        }
        let pm1 = &self.p - 1u32;
        let mut q = pm1.clone();
        let mut s = 0u32;
        while q.is_even() {
            q >>= 1;
            s += 1;
        }
        let mut z = BigUint::from(2u32);
        while self.legendre(&z) != -1 {
            z += 1u32;
        }
        let mut m = s;
        let mut c = self.pow(&z, &q);
        let mut t = self.pow(&a, &q);
        let mut r = self.pow(&a, &((&q + 1u32) >> 1));
        while !t.is_one() {
            let mut i = 0u32;
            let mut tt = t.clone();
            while !tt.is_one() {
                tt = self.mul(&tt, &tt);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = self.mul(&b, &b);
            }
            m = i;
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        debug_assert_eq!(self.mul(&r, &r), a);
        Some(r)
    }

    /// `Some(p)` when the prime fits a machine word, for the scanning paths.
    pub fn small(&self) -> Option<u64> {
        self.p.to_u64().filter(|&p| p < (1u64 << 31))
    }
}

/// A homogeneous ternary form with coefficients reduced mod p.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyModP {
    field: Fp,
    degree: u32,
    terms: BTreeMap<Monomial, BigUint>,
}

/// Coefficientwise reduction of a rational form modulo `prime`.
pub fn reduce_mod_p(poly: &HomPoly<BigRational>, prime: &BigUint) -> Result<PolyModP> {
    let field = Fp::new(prime.clone());
    let mut terms = BTreeMap::new();
    for (m, c) in poly.terms() {
        let r = field.reduce_rational(c)?;
        if !r.is_zero() {
            terms.insert(*m, r);
        }
    }
    Ok(PolyModP {
        field,
        degree: poly.degree(),
        terms,
    })
}

/// Reduction of an integral form; never fails.
pub fn reduce_int_mod_p(poly: &HomPoly<BigInt>, field: &Fp) -> PolyModP {
    let mut terms = BTreeMap::new();
    for (m, c) in poly.terms() {
        let r = field.reduce_int(c);
        if !r.is_zero() {
            terms.insert(*m, r);
        }
    }
    PolyModP {
        field: field.clone(),
        degree: poly.degree(),
        terms,
    }
}

impl PolyModP {
    pub fn field(&self) -> &Fp {
        &self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: [u32; 3]) -> BigUint {
        self.terms.get(&Monomial(exps)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigUint)> {
        self.terms.iter().rev()
    }

    pub fn eval(&self, pt: &[BigUint; 3]) -> BigUint {
        let f = &self.field;
        let mut acc = BigUint::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for i in 0..3 {
                for _ in 0..m.0[i] {
                    v = f.mul(&v, &pt[i]);
                }
            }
            acc = f.add(&acc, &v);
        }
        acc
    }

    pub fn partial(&self, var: usize) -> PolyModP {
        let f = &self.field;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut ne = m.0;
            ne[var] -= 1;
            let v = f.mul(c, &BigUint::from(e));
            if !v.is_zero() {
                terms.insert(Monomial(ne), v);
            }
        }
        PolyModP {
            field: f.clone(),
            degree: self.degree.saturating_sub(1),
            terms,
        }
    }

    /// Restriction to `x0 = a, x1 = b` as a polynomial in `x2`.
    pub fn specialize_x2(&self, a: &BigUint, b: &BigUint) -> UniModP {
        let f = &self.field;
        let mut coeffs = vec![BigUint::zero(); self.degree as usize + 1];
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for _ in 0..m.0[0] {
                v = f.mul(&v, a);
            }
            for _ in 0..m.0[1] {
                v = f.mul(&v, b);
            }
            let k = m.0[2] as usize;
            coeffs[k] = f.add(&coeffs[k], &v);
        }
        UniModP::new(f, coeffs)
    }

    /// Word-sized evaluator for exhaustive scans.
    pub fn small_evaluator(&self) -> Option<SmallForm> {
        let p = self.field.small()?;
        Some(SmallForm {
            p,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (c.to_u64().expect("reduced residue fits"), m.0))
                .collect(),
        })
    }
}

/// A reduced form evaluated with `u64` arithmetic (p < 2^31).
#[derive(Clone, Debug)]
pub struct SmallForm {
    pub p: u64,
    pub degree: u32,
    pub terms: Vec<(u64, [u32; 3])>,
}

impl SmallForm {
    pub fn eval(&self, pt: [u64; 3]) -> u64 {
        let p = self.p;
        let d = self.degree as usize;
        let mut pw = [[1u64; 16]; 3];
        for i in 0..3 {
            for k in 1..=d.min(15) {
                pw[i][k] = pw[i][k - 1] * pt[i] % p;
            }
        }
        let mut acc = 0u64;
        for (c, e) in &self.terms {
            let v = c * pw[0][e[0] as usize] % p * pw[1][e[1] as usize] % p * pw[2][e[2] as usize] % p;
            acc = (acc + v) % p;
        }
        acc
    }
}

/// Quadratic character on `u64` residues.
pub fn legendre_small(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if p == 2 {
        return 1;
    }
    if pow_small(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn pow_small(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

/// Univariate polynomial over F_p, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UniModP {
    field: Fp,
    coeffs: Vec<BigUint>,
}

impl UniModP {
    pub fn new(field: &Fp, coeffs: Vec<BigUint>) -> Self {
        let mut coeffs: Vec<BigUint> = coeffs.into_iter().map(|c| c % field.modulus()).collect();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniModP {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_ints(field: &Fp, coeffs: &[BigInt]) -> Self {
        Self::new(field, coeffs.iter().map(|c| field.reduce_int(c)).collect())
    }

    pub fn zero(field: &Fp) -> Self {
        UniModP {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Fp) -> Self {
        Self::new(field, vec![BigUint::one()])
    }

    /// The polynomial `x`.
    pub fn x(field: &Fp) -> Self {
        Self::new(field, vec![BigUint::zero(), BigUint::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn field(&self) -> &Fp {
        &self.field
    }

    pub fn eval(&self, x: &BigUint) -> BigUint {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigUint::zero();
        let c = (0..n)
            .map(|k| {
                self.field
                    .add(self.coeffs.get(k).unwrap_or(&z), other.coeffs.get(k).unwrap_or(&z))
            })
            .collect();
        Self::new(&self.field, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigUint::zero();
        let c = (0..n)
            .map(|k| {
                self.field
                    .sub(self.coeffs.get(k).unwrap_or(&z), other.coeffs.get(k).unwrap_or(&z))
            })
            .collect();
        Self::new(&self.field, c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![BigUint::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        for c in out.iter_mut() {
            *c %= f.modulus();
        }
        Self::new(f, out)
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lc) => {
                let inv = self.field.inv(lc);
                Self::new(
                    &self.field,
                    self.coeffs.iter().map(|c| self.field.mul(c, &inv)).collect(),
                )
            }
        }
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let f = &self.field;
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv = f.inv(divisor.coeffs.last().unwrap());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(f), self.clone());
        }
        let mut quot = vec![BigUint::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = f.mul(&rem[k], &inv);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = f.sub(&rem[idx], &f.mul(&c, dc));
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(f, quot), Self::new(f, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd; the gcd of two zero polynomials is zero.
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

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        Self::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| f.mul(c, &BigUint::from(k)))
                .collect(),
        )
    }

    /// `base^e mod self`.
    pub fn pow_mod(&self, base: &Self, e: &BigUint) -> Self {
        let mut result = Self::one(&self.field).rem(self);
        let b = base.rem(self);
        let bits = e.bits();
        for i in (0..bits).rev() {
            result = result.mul(&result).rem(self);
            if e.bit(i) {
                result = result.mul(&b).rem(self);
            }
        }
        result
    }

    /// gcd with `x^p - x`: the product of the distinct linear factors.
    pub fn rational_root_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return Self::one(&self.field);
        }
        let x = Self::x(&self.field);
        let xp = self.pow_mod(&x, self.field.modulus());
        self.gcd(&xp.sub(&x))
    }

    /// True when the polynomial is a nonzero product of linear factors over
    /// F_p (all of its roots in the algebraic closure lie in F_p).
    pub fn splits_completely(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let mut rest = self.monic();
        loop {
            if rest.degree() == Some(0) {
                return true;
            }
            let lin = rest.rational_root_part();
            if lin.degree() == Some(0) {
                return false;
            }
            rest = rest.div_rem(&lin).0;
        }
    }

    /// Distinct roots in F_p, sorted ascending.
    pub fn roots(&self) -> Vec<BigUint> {
        if self.is_zero() {
            return Vec::new();
        }
        let lin = self.rational_root_part();
        let mut out = Vec::new();
        if let Some(p) = self.field.small().filter(|&p| p < 4096) {
            for r in 0..p {
                let r = BigUint::from(r);
                if lin.eval(&r).is_zero() {
                    out.push(r);
                }
            }
            return out;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        split_linear(&lin, &mut rng, &mut out);
        out.sort();
        out
    }
}

/// Equal-degree splitting of a squarefree product of distinct linear factors.
fn split_linear(f: &UniModP, rng: &mut ChaCha8Rng, out: &mut Vec<BigUint>) {
    let field = f.field.clone();
    match f.degree() {
        None | Some(0) => {}
        Some(1) => {
            let m = f.monic();
            out.push(field.neg(&m.coeffs[0]));
        }
        Some(_) => {
            let p = field.modulus().clone();
            let e = (&p - 1u32) >> 1;
            loop {
                let a = rng.gen_biguint_below(&p);
                let shift = UniModP::new(&field, vec![a, BigUint::one()]);
                let h = f.pow_mod(&shift, &e).sub(&UniModP::one(&field));
                let g = f.gcd(&h);
                let d = g.degree().unwrap_or(0);
                if d > 0 && Some(d) != f.degree() {
                    let (q, _) = f.div_rem(&g);
                    split_linear(&g, rng, out);
                    split_linear(&q.monic(), rng, out);
                    return;
                }
            }
        }
    }
}

/// Helper to lift small signed integers into residues.
pub fn residue(field: &Fp, n: i64) -> BigUint {
    field.reduce_int(&BigInt::from(n))
}

/// Signed representative in `(-p/2, p/2]`.
pub fn signed_residue(field: &Fp, r: &BigUint) -> BigInt {
    let half = field.modulus() >> 1;
    if r > &half {
        BigInt::from(r.clone()) - BigInt::from(field.modulus().clone())
    } else {
        BigInt::from(r.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Fp {
        Fp::from_u64(p)
    }

    #[test]
    fn sqrt_mod_p() {
        let k = f(10007);
        for a in 1..200u32 {
            let a = BigUint::from(a);
            match k.sqrt(&a) {
                Some(r) => assert_eq!(k.mul(&r, &r), a),
                None => assert_eq!(k.legendre(&a), -1),
            }
        }
    }

    #[test]
    fn roots_of_split_polynomial() {
        for p in [101u64, 1_000_003] {
            let k = f(p);
            // (x-3)(x-5)(x+7)(x^2+1) mod p
            let mut g = UniModP::one(&k);
            for r in [3i64, 5, -7] {
                g = g.mul(&UniModP::new(&k, vec![residue(&k, -r), BigUint::one()]));
            }
            let q = UniModP::new(&k, vec![BigUint::one(), BigUint::zero(), BigUint::one()]);
            let g2 = g.mul(&q);
            let mut expect: Vec<BigUint> = [3i64, 5, -7].iter().map(|&r| residue(&k, r)).collect();
            if p % 4 == 1 {
                let i = k.sqrt(&residue(&k, -1)).unwrap();
                expect.push(k.neg(&i));
                expect.push(i);
            }
            expect.sort();
            assert_eq!(g2.roots(), expect);
            assert!(g.splits_completely());
            // x^2 + 1 splits iff p = 1 mod 4
            assert_eq!(q.splits_completely(), p % 4 == 1);
        }
    }

    #[test]
    fn splits_with_multiplicity() {
        let k = f(13);
        let lin = UniModP::new(&k, vec![residue(&k, -2), BigUint::one()]);
        let cube = lin.mul(&lin).mul(&lin);
        assert!(cube.splits_completely());
        assert_eq!(cube.roots(), vec![BigUint::from(2u32)]);
    }

    #[test]
    fn gcd_is_monic() {
        let k = f(7);
        let a = UniModP::new(&k, vec![residue(&k, -1), BigUint::zero(), BigUint::one()]);
        let b =
            UniModP::new(&k, vec![residue(&k, -1), BigUint::one()]).mul(&UniModP::new(&k, vec![BigUint::from(3u32)]));
        assert_eq!(a.gcd(&b), UniModP::new(&k, vec![residue(&k, -1), BigUint::one()]));
    }
}
