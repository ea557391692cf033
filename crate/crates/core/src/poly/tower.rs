//! Polynomials in `z` over `K[t]/(m)`, with the modulus split whenever a
//! leading coefficient turns out to be a zero divisor.

use num_rational::BigRational;

use super::modp::UniModP;
use super::uni::UniPoly;

/// Univariate polynomials over a field.
pub trait FieldPoly: Clone {
    fn is_zero(&self) -> bool;
    fn degree(&self) -> Option<usize>;
    fn div_rem(&self, d: &Self) -> (Self, Self);
    fn gcd(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
}

impl FieldPoly for UniPoly<BigRational> {
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn degree(&self) -> Option<usize> {
        UniPoly::degree(self)
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        UniPoly::div_rem(self, d)
    }
    fn gcd(&self, other: &Self) -> Self {
        UniPoly::gcd(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn zero_like(&self) -> Self {
        UniPoly::zero()
    }
    fn one_like(&self) -> Self {
        UniPoly::new(vec![num_traits::One::one()])
    }
}

impl FieldPoly for UniModP {
    fn is_zero(&self) -> bool {
        UniModP::is_zero(self)
    }
    fn degree(&self) -> Option<usize> {
        UniModP::degree(self)
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        UniModP::div_rem(self, d)
    }
    fn gcd(&self, other: &Self) -> Self {
        UniModP::gcd(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        UniModP::mul(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        UniModP::sub(self, other)
    }
    fn zero_like(&self) -> Self {
        UniModP::zero(self.field())
    }
    fn one_like(&self) -> Self {
        UniModP::one(self.field())
    }
}

/// Inverse of `a` modulo `m`, assuming `gcd(a, m) = 1`.
pub fn inverse_mod<P: FieldPoly>(a: &P, m: &P) -> P {
    let (mut r0, mut r1) = (m.clone(), a.div_rem(m).1);
    let (mut s0, mut s1) = (m.zero_like(), m.one_like());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s = s0.sub(&q.mul(&s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant c with s0 * a = c mod m.
    let c_inv = r0.one_like().div_rem(&r0).0;
    s0.mul(&c_inv).div_rem(m).1
}

/// Coefficients (constant first) of a polynomial in `z` over `K[t]/(m)`.
pub type Tower<P> = Vec<P>;

fn trim<P: FieldPoly>(m: &P, a: Tower<P>) -> Tower<P> {
    let mut a: Tower<P> = a.into_iter().map(|c| c.div_rem(m).1).collect();
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn nontrivial(d: &impl FieldPoly) -> bool {
    d.degree().unwrap_or(0) > 0
}

/// Splits `m` until the leading coefficient of `a` is a unit on each piece.
fn unit_leading<P: FieldPoly>(m: P, a: Tower<P>) -> Vec<(P, Tower<P>)> {
    let a = trim(&m, a);
    let Some(lc) = a.last() else {
        return vec![(m, a)];
    };
    let d = m.gcd(lc);
    if nontrivial(&d) {
        let other = m.div_rem(&d).0;
        let mut out = unit_leading(d, a.clone());
        out.extend(unit_leading(other, a));
        return out;
    }
    vec![(m, a)]
}

/// gcd of `a` and `b` over `K[t]/(m)`.
///
/// Returns pieces `(m_k, h_k)` with `prod m_k` having the same roots as `m`.
/// At each root of `m_k` the specialised gcd equals `h_k` specialised there,
/// with the same degree; an empty `h_k` means both inputs vanish there.
pub fn split_gcd<P: FieldPoly>(m: P, a: Tower<P>, b: Tower<P>) -> Vec<(P, Tower<P>)> {
    let a = trim(&m, a);
    let b = trim(&m, b);
    if b.is_empty() {
        return unit_leading(m, a);
    }
    if a.len() < b.len() {
        return split_gcd(m, b, a);
    }
    let lc = b.last().unwrap().clone();
    let d = m.gcd(&lc);
    if nontrivial(&d) {
        let other = m.div_rem(&d).0;
        let mut out = split_gcd(d, a.clone(), b.clone());
        out.extend(split_gcd(other, a, b));
        return out;
    }
    let inv = inverse_mod(&lc, &m);
    let db = b.len() - 1;
    let mut r = a;
    while r.len() > db {
        let k = r.len() - 1;
        let c = r[k].mul(&inv).div_rem(&m).1;
        for (j, bc) in b.iter().enumerate() {
            let idx = k - db + j;
            r[idx] = r[idx].sub(&c.mul(bc)).div_rem(&m).1;
        }
        r.pop();
        r = trim(&m, r);
    }
    split_gcd(m, b, r)
}

/// gcd of several towers, splitting as needed.
pub fn split_gcd_all<P: FieldPoly>(m: P, polys: &[Tower<P>]) -> Vec<(P, Tower<P>)> {
    let mut branches = vec![(m, Vec::new())];
    for f in polys {
        branches = branches
            .into_iter()
            .flat_map(|(m, h)| split_gcd(m, h, f.clone()))
            .collect();
    }
    branches
}
