//! Homogeneous polynomials in three variables over a generic coefficient ring.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;

use crate::poly::uni::UniPoly;
use crate::scalar::Scalar;

/// Exponent triple `(e0, e1, e2)` of a monomial `x0^e0 * x1^e1 * x2^e2`.
///
/// Ordered by total degree, then graded reverse lexicographic with
/// `x0 > x1 > x2`. Iterating a `BTreeMap<Monomial, _>` backwards therefore
/// lists terms in canonical (descending) print order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial([self.0[0] + other.0[0], self.0[1] + other.0[1], self.0[2] + other.0[2]])
    }

    /// All exponent triples of the given total degree, in ascending order.
    pub fn all_of_degree(degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for e0 in 0..=degree {
            for e1 in 0..=degree - e0 {
                out.push(Monomial([e0, e1, degree - e0 - e1]));
            }
        }
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for i in (0..3).rev() {
                match self.0[i].cmp(&other.0[i]) {
                    Ordering::Equal => continue,
                    // a larger exponent on the last differing variable means smaller
                    ord => return ord.reverse(),
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A homogeneous polynomial in `x0, x1, x2` with coefficients in `T`.
///
/// Stored coefficients are always nonzero and every monomial has total
/// degree `degree`. The zero polynomial keeps the degree it was created
/// with but adds to polynomials of any degree.
#[derive(Clone, PartialEq, Debug)]
pub struct HomPoly<T> {
    degree: u32,
    terms: BTreeMap<Monomial, T>,
}

impl<T: Scalar> HomPoly<T> {
    pub fn zero(degree: u32) -> Self {
        HomPoly {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    pub fn monomial(c: T, exps: [u32; 3]) -> Self {
        let m = Monomial(exps);
        let mut p = Self::zero(m.degree());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(T::one(), e)
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, summing
    /// repeated monomials. Fails if the monomials are not all of one degree.
    pub fn from_terms<I>(degree: u32, terms: I) -> Result<Self, String>
    where
        I: IntoIterator<Item = (T, [u32; 3])>,
    {
        let mut p = Self::zero(degree);
        for (c, e) in terms {
            let m = Monomial(e);
            if m.degree() != degree {
                return Err(format!(
                    "monomial {:?} has degree {}, expected {}",
                    e,
                    m.degree(),
                    degree
                ));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: [u32; 3]) -> T {
        self.terms.get(&Monomial(exps)).cloned().unwrap_or_else(T::zero)
    }

    /// Terms in canonical (descending) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter().rev()
    }

    pub fn map_coeffs<U: Scalar, F: Fn(&T) -> U>(&self, f: F) -> HomPoly<U> {
        let mut out = HomPoly::zero(self.degree);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map_coeffs(|x| x.clone() * c.clone())
    }

    pub fn eval(&self, point: &[T; 3]) -> T {
        let mut pows: [Vec<T>; 3] = Default::default();
        for (i, pw) in pows.iter_mut().enumerate() {
            pw.push(T::one());
            for k in 1..=self.degree as usize {
                let next = pw[k - 1].clone() * point[i].clone();
                pw.push(next);
            }
        }
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let e = m.0;
            acc = acc
                + c.clone()
                    * pows[0][e[0] as usize].clone()
                    * pows[1][e[1] as usize].clone()
                    * pows[2][e[2] as usize].clone();
        }
        acc
    }

    /// Formal partial derivative with respect to `x_var`.
    ///
    /// A constant differentiates to the zero polynomial of degree 0.
    pub fn partial(&self, var: usize) -> Self {
        assert!(var < 3, "variable index out of range");
        let mut out = Self::zero(self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut ne = m.0;
            ne[var] -= 1;
            out.add_term(Monomial(ne), c.clone() * T::from_int(e as i64));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(T::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `self(L x)` where row `i` of `linear` gives `x_i` as a linear form.
    pub fn compose_linear(&self, linear: &[[T; 3]; 3]) -> Self {
        let forms: Vec<HomPoly<T>> = linear
            .iter()
            .map(|row| {
                let mut f = HomPoly::zero(1);
                for (j, c) in row.iter().enumerate() {
                    f = &f + &HomPoly::var(j).scale(c);
                }
                f
            })
            .collect();
        let pows: Vec<Vec<HomPoly<T>>> = forms
            .iter()
            .map(|f| {
                let mut v = vec![HomPoly::constant(T::one())];
                for k in 1..=self.degree as usize {
                    let next = &v[k - 1] * f;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Self::zero(self.degree);
        for (m, c) in &self.terms {
            let e = m.0;
            let t = &(&pows[0][e[0] as usize] * &pows[1][e[1] as usize]) * &pows[2][e[2] as usize];
            out = &out + &t.scale(c);
        }
        out
    }

    /// Restricts to the line `x0 = a, x1 = b` and returns the univariate
    /// polynomial in `x2`.
    pub fn specialize_x2(&self, a: &T, b: &T) -> UniPoly<T> {
        let d = self.degree as usize;
        let mut coeffs = vec![T::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.0;
            let v = c.clone() * pow_t(a, e[0]) * pow_t(b, e[1]);
            coeffs[e[2] as usize] = coeffs[e[2] as usize].clone() + v;
        }
        UniPoly::new(coeffs)
    }

    /// Renders the polynomial with variables named `{prefix}0..{prefix}2`.
    pub fn to_string_with(&self, prefix: &str) -> String
    where
        T: fmt::Display + Signed,
    {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            let mono = monomial_text(m, prefix);
            if mono.is_empty() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{}*{}", abs, mono));
            }
        }
        s
    }
}

fn pow_t<T: Scalar>(x: &T, e: u32) -> T {
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc * x.clone();
    }
    acc
}

fn monomial_text(m: &Monomial, prefix: &str) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("{}{}", prefix, i)),
            _ => parts.push(format!("{}{}^{}", prefix, i, e)),
        }
    }
    parts.join("*")
}

impl<T: Scalar + fmt::Display + Signed> fmt::Display for HomPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with("x"))
    }
}

fn check_degrees<T: Scalar>(a: &HomPoly<T>, b: &HomPoly<T>) -> u32 {
    if a.is_zero() {
        return b.degree;
    }
    if b.is_zero() {
        return a.degree;
    }
    assert_eq!(a.degree, b.degree, "adding homogeneous polynomials of different degree");
    a.degree
}

impl<'a, T: Scalar> Add<&'a HomPoly<T>> for &'a HomPoly<T> {
    type Output = HomPoly<T>;

    fn add(self, rhs: &'a HomPoly<T>) -> HomPoly<T> {
        let degree = check_degrees(self, rhs);
        let mut out = self.clone();
        out.degree = degree;
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a, T: Scalar> Sub<&'a HomPoly<T>> for &'a HomPoly<T> {
    type Output = HomPoly<T>;

    fn sub(self, rhs: &'a HomPoly<T>) -> HomPoly<T> {
        let degree = check_degrees(self, rhs);
        let mut out = self.clone();
        out.degree = degree;
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'a, T: Scalar> Mul<&'a HomPoly<T>> for &'a HomPoly<T> {
    type Output = HomPoly<T>;

    fn mul(self, rhs: &'a HomPoly<T>) -> HomPoly<T> {
        let mut out = HomPoly::zero(self.degree + rhs.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<T: Scalar> Neg for &HomPoly<T> {
    type Output = HomPoly<T>;

    fn neg(self) -> HomPoly<T> {
        self.map_coeffs(|c| -c.clone())
    }
}

impl<T: Scalar> Add for HomPoly<T> {
    type Output = HomPoly<T>;
    fn add(self, rhs: HomPoly<T>) -> HomPoly<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for HomPoly<T> {
    type Output = HomPoly<T>;
    fn sub(self, rhs: HomPoly<T>) -> HomPoly<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for HomPoly<T> {
    type Output = HomPoly<T>;
    fn mul(self, rhs: HomPoly<T>) -> HomPoly<T> {
        &self * &rhs
    }
}

impl<T: Scalar> Neg for HomPoly<T> {
    type Output = HomPoly<T>;
    fn neg(self) -> HomPoly<T> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = HomPoly<BigInt>;

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn grevlex_order_matches_printed_sextics() {
        // x0^6 > x0^5 x1 > ... > x1^6 > x0^5 x2
        let a = Monomial([0, 6, 0]);
        let b = Monomial([5, 0, 1]);
        assert!(a > b);
        assert!(Monomial([6, 0, 0]) > Monomial([5, 1, 0]));
        assert!(Monomial([0, 1, 5]) > Monomial([0, 0, 6]));
    }

    #[test]
    fn partial_of_monomials() {
        let p = P::monomial(int(1), [2, 0, 0]);
        assert_eq!(p.partial(0), P::monomial(int(2), [1, 0, 0]));
        let q = P::monomial(int(1), [0, 3, 3]);
        assert!(q.partial(0).is_zero());
        assert_eq!(q.partial(0).degree(), 5);
        assert!(P::constant(int(7)).partial(1).is_zero());
    }

    #[test]
    fn display_canonical() {
        let p = P::from_terms(2, vec![(int(-5), [2, 0, 0]), (int(4), [1, 0, 1]), (int(1), [0, 2, 0])]).unwrap();
        assert_eq!(p.to_string(), "-5*x0^2 + x1^2 + 4*x0*x2");
        assert_eq!(P::zero(3).to_string(), "0");
        assert_eq!(P::constant(int(-3)).to_string_with("y"), "-3");
    }

    #[test]
    fn compose_linear_identity_and_shear() {
        let p = P::from_terms(2, vec![(int(1), [1, 1, 0]), (int(3), [0, 0, 2])]).unwrap();
        let id = [
            [int(1), int(0), int(0)],
            [int(0), int(1), int(0)],
            [int(0), int(0), int(1)],
        ];
        assert_eq!(p.compose_linear(&id), p);
        let shear = [
            [int(1), int(0), int(2)],
            [int(0), int(1), int(-1)],
            [int(0), int(0), int(1)],
        ];
        let h = p.compose_linear(&shear);
        let pt = [int(3), int(-2), int(5)];
        let image = [int(3 + 10), int(-2 - 5), int(5)];
        assert_eq!(h.eval(&pt), p.eval(&image));
    }

    #[test]
    fn specialize_restricts_to_line() {
        let p = P::from_terms(2, vec![(int(1), [1, 1, 0]), (int(3), [0, 1, 1]), (int(2), [0, 0, 2])]).unwrap();
        let u = p.specialize_x2(&int(2), &int(5));
        for z in -3..4 {
            assert_eq!(u.eval(&int(z)), p.eval(&[int(2), int(5), int(z)]));
        }
    }
}
