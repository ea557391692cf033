//! Jacobian smoothness certificates for plane sextics, singular points
//! modulo p and primes of bad reduction.
//!
//! Elimination works in sheared coordinates `x0 -> x0 + a0*x2`,
//! `x1 -> x1 + a1*x2` chosen so that every partial derivative has a
//! nonzero constant `x2^5` coefficient. For such a shear, `Res_x2` of two
//! partials restricted to `x1 = 1` vanishes at `x0 = t` exactly when the
//! two share a root on that line, and the homogeneous resultant of two such
//! eliminants vanishes whenever the partials have a common projective zero.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ntheory::{factor, is_probable_prime, primes_up_to, trial_divide};
use crate::poly::{reduce_int_mod_p, resultant_formal, split_gcd_all, Fp, PolyModP, Tower, UniModP, UniPoly};
use crate::{QPoly, QUniPoly, ZPoly, ZUniPoly};

/// Cofactors up to this size are attacked with Pollard rho.
pub const RHO_MAX_BITS: u64 = 160;
const RHO_BUDGET: u64 = 1 << 22;

/// Primes below this are scanned exhaustively for rational singular points.
pub const SCAN_THRESHOLD: u64 = 512;

/// Fixed sequence of shears `(a0, a1)`.
pub const SHEARS: [(i64, i64); 12] = [
    (1, 2),
    (2, -1),
    (-1, 3),
    (3, 1),
    (1, -3),
    (-2, 1),
    (2, 3),
    (-3, 2),
    (1, 5),
    (4, -1),
    (-1, -4),
    (5, 2),
];

/// A point of P^2(F_p) with first nonzero coordinate equal to 1.
pub type PointModP = [BigUint; 3];

pub fn normalize_mod_p(field: &Fp, pt: &[BigUint; 3]) -> Option<PointModP> {
    let i = pt.iter().position(|c| !c.is_zero())?;
    let inv = field.inv(&pt[i]);
    Some(std::array::from_fn(|k| field.mul(&pt[k], &inv)))
}

fn shear_matrix(shear: (i64, i64)) -> [[BigInt; 3]; 3] {
    let i = |n: i64| BigInt::from(n);
    [[i(1), i(0), i(shear.0)], [i(0), i(1), i(shear.1)], [i(0), i(0), i(1)]]
}

/// Resultant in `x2` of two forms on the line `x1 = 1`, as a polynomial in
/// `t = x0`, recovered by interpolation at `t = 0..=bound`.
fn eliminant(f: &ZPoly, g: &ZPoly) -> ZUniPoly {
    let (m, n) = (f.degree() as usize, g.degree() as usize);
    let bound = m * n;
    let one = BigInt::one();
    let values: Vec<BigInt> = (0..=bound)
        .map(|t| {
            let t = BigInt::from(t);
            resultant_formal(&f.specialize_x2(&t, &one), m, &g.specialize_x2(&t, &one), n)
        })
        .collect();
    interpolate(&values)
}

/// The polynomial of degree `< values.len()` taking `values[i]` at `i`.
fn interpolate(values: &[BigInt]) -> ZUniPoly {
    let n = values.len();
    let mut dd: Vec<BigRational> = values.iter().map(|v| BigRational::from_integer(v.clone())).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / BigRational::from_integer(BigInt::from(j));
        }
    }
    // Horner on the Newton form with nodes 0, 1, ..., n-1.
    let mut acc: QUniPoly = UniPoly::zero();
    for k in (0..n).rev() {
        let node = QUniPoly::new(vec![
            BigRational::from_integer(BigInt::from(-(k as i64))),
            BigRational::one(),
        ]);
        acc = &(&acc * &node) + &QUniPoly::new(vec![dd[k].clone()]);
    }
    acc.map_coeffs(|c| {
        assert!(c.is_integer(), "eliminant has integral coefficients");
        c.to_integer()
    })
}

/// Integral elimination data for one shear.
#[derive(Clone, Debug)]
pub struct ShearedElimination {
    pub shear: (i64, i64),
    pub h: ZPoly,
    pub partials: [ZPoly; 3],
    /// `Res(P0,P1)`, `Res(P0,P2)`, `Res(P1,P2)`, `Res(h,P0)` in `t`.
    pub eliminants: [ZUniPoly; 4],
}

impl ShearedElimination {
    /// `None` when some partial loses its `x2^5` term under this shear.
    pub fn new(g: &ZPoly, shear: (i64, i64)) -> Option<Self> {
        let h = g.compose_linear(&shear_matrix(shear));
        let partials = [h.partial(0), h.partial(1), h.partial(2)];
        if partials.iter().any(|p| p.coeff([0, 0, 5]).is_zero()) || h.coeff([0, 0, 6]).is_zero() {
            return None;
        }
        let eliminants = [
            eliminant(&partials[0], &partials[1]),
            eliminant(&partials[0], &partials[2]),
            eliminant(&partials[1], &partials[2]),
            eliminant(&h, &partials[0]),
        ];
        Some(ShearedElimination {
            shear,
            h,
            partials,
            eliminants,
        })
    }

    /// Homogeneous resultant of the first two eliminants (formal degree 25).
    pub fn chain_resultant(&self) -> BigInt {
        resultant_formal(&self.eliminants[0], 25, &self.eliminants[1], 25)
    }

    fn to_original_mod_p(&self, field: &Fp, pt: &[BigUint; 3]) -> PointModP {
        let a0 = field.reduce_int(&BigInt::from(self.shear.0));
        let a1 = field.reduce_int(&BigInt::from(self.shear.1));
        let x0 = field.add(&pt[0], &field.mul(&a0, &pt[2]));
        let x1 = field.add(&pt[1], &field.mul(&a1, &pt[2]));
        normalize_mod_p(field, &[x0, x1, pt[2].clone()]).expect("nonzero point")
    }
}

/// Lazily computed eliminations for a fixed integral sextic, shared across
/// primes (and threads).
pub struct Eliminator {
    g: ZPoly,
    cache: Vec<OnceLock<Option<ShearedElimination>>>,
}

impl Eliminator {
    pub fn new(g: ZPoly) -> Self {
        Eliminator {
            g,
            cache: SHEARS.iter().map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn poly(&self) -> &ZPoly {
        &self.g
    }

    pub fn shear(&self, idx: usize) -> Option<&ShearedElimination> {
        self.cache[idx]
            .get_or_init(|| ShearedElimination::new(&self.g, SHEARS[idx]))
            .as_ref()
    }

    pub fn usable_shears(&self) -> impl Iterator<Item = &ShearedElimination> {
        (0..SHEARS.len()).filter_map(move |i| self.shear(i))
    }

    /// Geometric singular locus of the reduction mod an odd prime.
    pub fn locus_mod_p(&self, prime: &BigUint) -> Result<ModPLocus> {
        let field = Fp::new(prime.clone());
        let gp = reduce_int_mod_p(&self.g, &field);
        if gp.is_zero() {
            return Err(Error::DegenerateReduction {
                prime: prime.to_string(),
            });
        }
        let dp: Vec<PolyModP> = (0..3).map(|i| gp.partial(i)).collect();
        if dp.iter().all(|d| d.is_zero()) {
            // Every point of the curve is singular.
            let points = match field.small().filter(|&p| p < SCAN_THRESHOLD) {
                Some(_) => scan_singular(&gp),
                None => Vec::new(),
            };
            return Ok(ModPLocus::finish(&self.g, &field, points, false, true, None));
        }
        let mut fallback: Option<ModPLocus> = None;
        for elim in self.usable_shears() {
            if let Some(locus) = analyze_sheared(&self.g, elim, &field) {
                if locus.complete || locus.positive_dimensional {
                    return Ok(locus);
                }
                fallback.get_or_insert(locus);
            }
        }
        match fallback {
            Some(l) => Ok(l),
            None => {
                let points = match field.small().filter(|&p| p < SCAN_THRESHOLD) {
                    Some(_) => scan_singular(&gp),
                    None => Vec::new(),
                };
                Ok(ModPLocus::finish(&self.g, &field, points, false, false, None))
            }
        }
    }
}

/// A singular point of a reduction together with its node test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    pub point: PointModP,
    pub node: bool,
}

/// Singular locus of `g mod p` over the algebraic closure.
///
/// `complete` means every geometric singular point is F_p-rational and
/// listed in `points`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPLocus {
    pub prime: BigUint,
    pub points: Vec<SingularPoint>,
    pub complete: bool,
    pub positive_dimensional: bool,
    pub shear: Option<(i64, i64)>,
}

impl ModPLocus {
    fn finish(
        g: &ZPoly,
        field: &Fp,
        mut points: Vec<PointModP>,
        complete: bool,
        positive_dimensional: bool,
        shear: Option<(i64, i64)>,
    ) -> Self {
        points.sort();
        points.dedup();
        let p = field.modulus().clone();
        let odd = p != BigUint::from(2u32);
        let points = points
            .into_iter()
            .map(|pt| {
                let node = odd && !positive_dimensional && ordinary_double_point_int(g, field, &pt);
                SingularPoint { point: pt, node }
            })
            .collect();
        ModPLocus {
            prime: p,
            points,
            complete,
            positive_dimensional,
            shear,
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.complete && self.points.is_empty() && !self.positive_dimensional
    }

    /// Hypotheses for constancy of evaluation at a bad prime: the geometric
    /// singular locus is known, has fewer than 8 points, all nodes.
    pub fn node_hypotheses_hold(&self) -> bool {
        self.complete && !self.positive_dimensional && self.points.len() < 8 && self.points.iter().all(|s| s.node)
    }
}

/// A form restricted to `x1 = 1`, as a polynomial in `z = x2` with
/// coefficients in `F_p[t]`, `t = x0`.
fn tower_mod_p(f: &PolyModP) -> Tower<UniModP> {
    let field = f.field();
    let mut out = vec![UniModP::zero(field); f.degree() as usize + 1];
    for (m, c) in f.terms() {
        let mut t = vec![BigUint::zero(); m.0[0] as usize + 1];
        t[m.0[0] as usize] = c.clone();
        let k = m.0[2] as usize;
        out[k] = out[k].add(&UniModP::new(field, t));
    }
    out
}

fn analyze_sheared(g: &ZPoly, elim: &ShearedElimination, field: &Fp) -> Option<ModPLocus> {
    let hp = reduce_int_mod_p(&elim.h, field);
    let dp: Vec<PolyModP> = elim.partials.iter().map(|d| reduce_int_mod_p(d, field)).collect();
    // Top z-coefficients; an eliminant only detects common roots when one
    // of its two forms keeps its degree in z.
    let top = [
        !dp[0].coeff([0, 0, 5]).is_zero(),
        !dp[1].coeff([0, 0, 5]).is_zero(),
        !dp[2].coeff([0, 0, 5]).is_zero(),
        !hp.coeff([0, 0, 6]).is_zero(),
    ];
    let pairs = [(0, 1), (0, 2), (1, 2), (3, 0)];
    let mut s = UniModP::zero(field);
    for (e, &(i, j)) in elim.eliminants.iter().zip(&pairs) {
        if top[i] || top[j] {
            s = s.gcd(&UniModP::from_ints(field, e.coeffs()));
        }
    }
    if s.is_zero() {
        return None;
    }
    // In characteristic dividing 6 the Euler relation no longer puts the
    // curve inside the common zeros of the partials.
    let mut forms: Vec<&PolyModP> = dp.iter().collect();
    if field.modulus() <= &BigUint::from(3u32) {
        forms.push(&hp);
    }
    let mut complete = true;
    let mut positive_dimensional = false;
    let mut points = Vec::new();
    let fibre = |a: &BigUint, b: &BigUint, points: &mut Vec<PointModP>| -> Option<bool> {
        let hz = forms
            .iter()
            .fold(UniModP::zero(field), |acc, f| acc.gcd(&f.specialize_x2(a, b)));
        if hz.is_zero() {
            return None;
        }
        for z in hz.roots() {
            points.push(elim.to_original_mod_p(field, &[a.clone(), b.clone(), z]));
        }
        Some(hz.splits_completely())
    };
    if s.degree().unwrap_or(0) > 0 {
        let towers: Vec<_> = forms.iter().map(|f| tower_mod_p(f)).collect();
        for (m, h) in split_gcd_all(s, &towers) {
            if h.is_empty() {
                positive_dimensional = true;
                continue;
            }
            if h.len() < 2 {
                continue;
            }
            complete &= m.splits_completely();
            for t in m.roots() {
                match fibre(&t, &BigUint::one(), &mut points) {
                    Some(split) => complete &= split,
                    None => positive_dimensional = true,
                }
            }
        }
    }
    match fibre(&BigUint::one(), &BigUint::zero(), &mut points) {
        Some(split) => complete &= split,
        None => positive_dimensional = true,
    }
    let complete = complete && !positive_dimensional;
    Some(ModPLocus::finish(
        g,
        field,
        points,
        complete,
        positive_dimensional,
        Some(elim.shear),
    ))
}

/// Exhaustive search of P^2(F_p) for common zeros of g and its partials.
fn scan_singular(gp: &PolyModP) -> Vec<PointModP> {
    let forms: Vec<_> = std::iter::once(gp.clone())
        .chain((0..3).map(|i| gp.partial(i)))
        .map(|f| f.small_evaluator().expect("small prime"))
        .collect();
    let p = forms[0].p;
    let mut out = Vec::new();
    for pt in projective_points_small(p) {
        if forms.iter().all(|f| f.eval(pt) == 0) {
            out.push(pt.map(BigUint::from));
        }
    }
    out
}

/// Points of P^2(F_p) normalised with first nonzero coordinate 1, in
/// lexicographic order.
pub fn projective_points_small(p: u64) -> impl Iterator<Item = [u64; 3]> {
    let a = (0..p).flat_map(move |y| (0..p).map(move |z| [1, y, z]));
    let b = (0..p).map(|z| [0, 1, z]);
    a.chain(b).chain(std::iter::once([0, 0, 1]))
}

/// Rational singular points of `g mod p`: exhaustive scan below
/// [`SCAN_THRESHOLD`], elimination above.
pub fn singular_points_mod_p(g: &QPoly, prime: &BigUint) -> Result<Vec<PointModP>> {
    let gp = crate::poly::reduce_mod_p(g, prime)?;
    if gp.is_zero() {
        return Err(Error::DegenerateReduction {
            prime: prime.to_string(),
        });
    }
    if prime < &BigUint::from(SCAN_THRESHOLD) {
        let mut pts = scan_singular(&gp);
        pts.sort();
        return Ok(pts);
    }
    let locus = Eliminator::new(clear_denominators(g)).locus_mod_p(prime)?;
    Ok(locus.points.into_iter().map(|s| s.point).collect())
}

/// Scales a rational form to a primitive integral one.
pub fn clear_denominators(g: &QPoly) -> ZPoly {
    let lcm = g.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let scaled = g.map_coeffs(|c| (c * BigRational::from_integer(lcm.clone())).to_integer());
    primitive_part(&scaled)
}

pub fn primitive_part(g: &ZPoly) -> ZPoly {
    let content = g.terms().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
    if content.is_zero() || content.is_one() {
        return g.clone();
    }
    g.map_coeffs(|c| c / &content)
}

fn ordinary_double_point_int(g: &ZPoly, field: &Fp, pt: &PointModP) -> bool {
    let gp = reduce_int_mod_p(g, field);
    hessian_nondegenerate(&gp, pt)
}

fn hessian_nondegenerate(gp: &PolyModP, pt: &PointModP) -> bool {
    let field = gp.field();
    let i = pt.iter().position(|c| !c.is_zero()).expect("projective point");
    let pt = normalize_at(field, pt, i);
    let others: Vec<usize> = (0..3).filter(|&k| k != i).collect();
    let (j, k) = (others[0], others[1]);
    let d = |a: usize, b: usize| gp.partial(a).partial(b).eval(&pt);
    let hjj = d(j, j);
    let hjk = d(j, k);
    let hkk = d(k, k);
    let disc = field.sub(&field.mul(&hjk, &hjk), &field.mul(&hjj, &hkk));
    !disc.is_zero()
}

fn normalize_at(field: &Fp, pt: &PointModP, i: usize) -> PointModP {
    let inv = field.inv(&pt[i]);
    std::array::from_fn(|k| field.mul(&pt[k], &inv))
}

/// Whether `point` is an ordinary double point of `g mod prime`: the
/// quadratic part of the local expansion is a nondegenerate binary form.
pub fn is_ordinary_double_point(g: &QPoly, prime: &BigUint, point: &[BigUint; 3]) -> Result<bool> {
    if prime == &BigUint::from(2u32) {
        return Err(Error::invalid("node test needs an odd prime"));
    }
    let gp = crate::poly::reduce_mod_p(g, prime)?;
    let pt: [BigUint; 3] = std::array::from_fn(|k| &point[k] % prime);
    if pt.iter().all(|c| c.is_zero()) {
        return Err(Error::invalid("zero vector is not a projective point"));
    }
    let singular = !gp.eval(&pt).is_zero() || (0..3).any(|i| !gp.partial(i).eval(&pt).is_zero());
    if singular {
        return Err(Error::invalid("point is not a singular point of the reduction"));
    }
    Ok(hessian_nondegenerate(&gp, &pt))
}

/// How a non-smooth sextic fails to be smooth.
#[derive(Clone, Debug, PartialEq)]
pub enum SingularWitness {
    /// A rational point where `g` and all partials vanish.
    RationalPoint([BigInt; 3]),
    /// Singular points `[t : 1 : z]` in sheared coordinates, with
    /// `field_poly(t) = 0` and `z_poly(z) = 0`, the latter's coefficients
    /// being polynomials in `t` modulo `field_poly`.
    AlgebraicPoints {
        shear: (i64, i64),
        field_poly: QUniPoly,
        z_poly: Vec<QUniPoly>,
    },
    /// Singular points `[1 : 0 : z]` in sheared coordinates.
    LinePoints { shear: (i64, i64), z_poly: QUniPoly },
    /// The partial derivatives share a curve component.
    PositiveDimensional { shear: (i64, i64) },
}

/// Outcome of the Jacobian criterion over Q.
#[derive(Clone, Debug, PartialEq)]
pub enum SmoothnessCertificate {
    /// The homogeneous resultant of the first two eliminants is nonzero.
    Smooth {
        shear: (i64, i64),
        resultant: BigInt,
    },
    Singular(SingularWitness),
}

impl SmoothnessCertificate {
    pub fn smooth(&self) -> bool {
        matches!(self, SmoothnessCertificate::Smooth { .. })
    }
}

impl fmt::Display for SmoothnessCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmoothnessCertificate::Smooth { shear, resultant } => {
                let digits = resultant.abs().to_string();
                writeln!(f, "smooth: true")?;
                writeln!(f, "shear: x0 -> x0 + {}*x2, x1 -> x1 + {}*x2", shear.0, shear.1)?;
                writeln!(f, "resultant_digits: {}", digits.len())?;
                write!(f, "resultant_trailing: {}", &digits[digits.len().saturating_sub(20)..])
            }
            SmoothnessCertificate::Singular(w) => {
                writeln!(f, "smooth: false")?;
                match w {
                    SingularWitness::RationalPoint(p) => write!(f, "witness: rational point [{}, {}, {}]", p[0], p[1], p[2]),
                    SingularWitness::AlgebraicPoints { shear, field_poly, z_poly } => write!(
                        f,
                        "witness: points [t : 1 : z] after shear ({}, {}) with t a root of degree-{} polynomial, z of degree {}",
                        shear.0,
                        shear.1,
                        field_poly.degree().unwrap_or(0),
                        z_poly.len().saturating_sub(1)
                    ),
                    SingularWitness::LinePoints { shear, z_poly } => write!(
                        f,
                        "witness: points [1 : 0 : z] after shear ({}, {}), z of degree {}",
                        shear.0,
                        shear.1,
                        z_poly.degree().unwrap_or(0)
                    ),
                    SingularWitness::PositiveDimensional { shear } => {
                        write!(f, "witness: partials share a curve (shear ({}, {}))", shear.0, shear.1)
                    }
                }
            }
        }
    }
}

/// Decides smoothness of the plane curve `g = 0` over the algebraic
/// closure of Q.
pub fn is_smooth_sextic(g: &QPoly) -> Result<SmoothnessCertificate> {
    if g.is_zero() {
        return Err(Error::invalid("zero polynomial"));
    }
    let zg = clear_denominators(g);
    let elim = Eliminator::new(zg.clone());
    let mut first: Option<&ShearedElimination> = None;
    for e in elim.usable_shears().take(4) {
        let r = e.chain_resultant();
        if !r.is_zero() {
            return Ok(SmoothnessCertificate::Smooth {
                shear: e.shear,
                resultant: r,
            });
        }
        first.get_or_insert(e);
    }
    if let Some(pt) = small_rational_singular_point(&zg) {
        return Ok(SmoothnessCertificate::Singular(SingularWitness::RationalPoint(pt)));
    }
    let e = first.ok_or(Error::NonGenericCoordinates)?;
    algebraic_witness(e).ok_or(Error::NonGenericCoordinates)
}

fn small_rational_singular_point(g: &ZPoly) -> Option<[BigInt; 3]> {
    let forms = [g.clone(), g.partial(0), g.partial(1), g.partial(2)];
    let coordinate = [[0i64, 0, 1], [0, 1, 0], [1, 0, 0]];
    let shells = (1..=3i64).flat_map(|n| {
        let r = -n..=n;
        r.clone()
            .flat_map(move |a| {
                let r = -n..=n;
                r.clone().flat_map(move |b| (-n..=n).map(move |c| [a, b, c]))
            })
            .filter(move |p| p.iter().map(|c| c.abs()).max() == Some(n))
    });
    coordinate.into_iter().chain(shells).find_map(|p| {
        let pt = p.map(BigInt::from);
        forms.iter().all(|f| f.eval(&pt).is_zero()).then_some(pt)
    })
}

fn algebraic_witness(e: &ShearedElimination) -> Option<SmoothnessCertificate> {
    let to_q = |u: &ZUniPoly| u.map_coeffs(|c| BigRational::from_integer(c.clone()));
    let g = e.eliminants[..3]
        .iter()
        .fold(QUniPoly::zero(), |acc, el| acc.gcd(&to_q(el)));
    if g.is_zero() {
        return Some(SmoothnessCertificate::Singular(SingularWitness::PositiveDimensional {
            shear: e.shear,
        }));
    }
    // Points on the line x1 = 0.
    let one = BigInt::one();
    let zero = BigInt::zero();
    let line = e
        .partials
        .iter()
        .fold(QUniPoly::zero(), |acc, p| acc.gcd(&to_q(&p.specialize_x2(&one, &zero))));
    if line.degree().unwrap_or(0) > 0 {
        return Some(SmoothnessCertificate::Singular(SingularWitness::LinePoints {
            shear: e.shear,
            z_poly: line,
        }));
    }
    let sf = g.squarefree();
    if sf.degree().unwrap_or(0) == 0 {
        return None;
    }
    // Partials on x1 = 1 as polynomials in z with coefficients in Q[t].
    let as_tower = |p: &ZPoly| -> Tower<QUniPoly> {
        let mut coeffs = vec![QUniPoly::zero(); p.degree() as usize + 1];
        for (m, c) in p.terms() {
            let mut t = vec![BigRational::zero(); m.0[0] as usize + 1];
            t[m.0[0] as usize] = BigRational::from_integer(c.clone());
            let k = m.0[2] as usize;
            coeffs[k] = &coeffs[k] + &QUniPoly::new(t);
        }
        coeffs
    };
    let towers: Vec<_> = e.partials.iter().map(as_tower).collect();
    split_gcd_all(sf, &towers)
        .into_iter()
        .find(|(_, h)| h.len() >= 2)
        .map(|(field_poly, z_poly)| {
            SmoothnessCertificate::Singular(SingularWitness::AlgebraicPoints {
                shear: e.shear,
                field_poly,
                z_poly,
            })
        })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BadReason {
    /// p = 2 is always treated as bad.
    Convention,
    /// p divides the non-square part of the content of g.
    Degenerate,
    /// The reduced sextic is singular (or not certified smooth).
    Singular(ModPLocus),
}

/// A prime at which the reduction of the double sextic is bad.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadPrime {
    pub prime: BigUint,
    pub reason: BadReason,
}

impl BadPrime {
    pub fn by_convention(&self) -> bool {
        self.reason == BadReason::Convention
    }

    pub fn locus(&self) -> Option<&ModPLocus> {
        match &self.reason {
            BadReason::Singular(l) => Some(l),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BadPrimeReport {
    pub certified_bad: Vec<BadPrime>,
    /// Candidate primes whose reduction turned out to be smooth.
    pub rejected: Vec<BigUint>,
    /// Primes below the search bound dividing the candidate integer.
    pub trial_division_primes: Vec<u64>,
    /// Externally supplied primes that were checked.
    pub external_primes: Vec<BigUint>,
    /// Primes split off the remaining cofactor by Pollard rho.
    pub rho_primes: Vec<BigUint>,
    pub candidate_integer: BigInt,
    /// Part of the candidate integer not accounted for by the trial and
    /// external primes; 1 when the bad-prime list is complete.
    pub cofactor: BigUint,
    pub search_bound: u64,
}

impl BadPrimeReport {
    pub fn primes(&self) -> Vec<BigUint> {
        self.certified_bad.iter().map(|b| b.prime.clone()).collect()
    }

    pub fn is_bad(&self, p: &BigUint) -> bool {
        self.certified_bad.iter().any(|b| &b.prime == p)
    }

    /// Whether every prime of bad reduction is known.
    pub fn complete(&self) -> bool {
        self.cofactor.is_one()
    }
}

/// Candidate integer: gcd of the chain resultants of the first two usable
/// shears. Every prime at which the sextic acquires a singular point
/// divides it.
pub fn candidate_integer(elim: &Eliminator) -> Result<BigInt> {
    let mut acc = BigInt::zero();
    let mut used = 0;
    for e in elim.usable_shears() {
        let r = e.chain_resultant();
        if r.is_zero() {
            continue;
        }
        acc = acc.gcd(&r);
        used += 1;
        if used == 2 {
            break;
        }
    }
    if used == 0 {
        return Err(Error::NonGenericCoordinates);
    }
    Ok(acc)
}

/// Bad primes of `w^2 = g`: 2 by convention, plus every prime up to
/// `search_bound` or in `extra_primes` whose reduction is verified
/// singular.
pub fn bad_prime_candidates(g: &ZPoly, search_bound: u64, extra_primes: &[BigUint]) -> Result<BadPrimeReport> {
    if g.is_zero() {
        return Err(Error::invalid("zero polynomial"));
    }
    let content = g.terms().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
    let (content_primes, rest) = trial_divide(&content, &primes_up_to(search_bound.min(1 << 20)));
    if !rest.is_one() {
        return Err(Error::invalid("content of the sextic could not be factored"));
    }
    let degenerate: Vec<BigUint> = content_primes
        .iter()
        .filter(|(p, e)| e % 2 == 1 && *p != 2)
        .map(|(p, _)| BigUint::from(*p))
        .collect();
    let g = &primitive_part(g);
    for p in extra_primes {
        if !is_probable_prime(p, 64) {
            return Err(Error::invalid(format!("external factor {} is not a probable prime", p)));
        }
    }
    let elim = Eliminator::new(g.clone());
    let cand = candidate_integer(&elim)?;
    let (found, mut cofactor) = trial_divide(&cand, &primes_up_to(search_bound));
    for p in extra_primes {
        while (&cofactor % p).is_zero() {
            cofactor /= p;
        }
    }
    let mut rho_primes = Vec::new();
    if !cofactor.is_one() && cofactor.bits() <= RHO_MAX_BITS {
        let (f, stuck) = factor(&cofactor, RHO_BUDGET);
        rho_primes = f.into_iter().map(|(p, _)| p).collect();
        cofactor = stuck.iter().product();
    }
    let mut to_check: Vec<BigUint> = found.iter().map(|(p, _)| BigUint::from(*p)).collect();
    to_check.extend(extra_primes.iter().cloned());
    to_check.extend(rho_primes.iter().cloned());
    to_check.retain(|p| p != &BigUint::from(2u32) && !degenerate.contains(p));
    to_check.sort();
    to_check.dedup();

    let analysed: Vec<(BigUint, Result<ModPLocus>)> =
        to_check.par_iter().map(|p| (p.clone(), elim.locus_mod_p(p))).collect();
    let mut certified_bad = vec![BadPrime {
        prime: BigUint::from(2u32),
        reason: BadReason::Convention,
    }];
    certified_bad.extend(degenerate.iter().map(|p| BadPrime {
        prime: p.clone(),
        reason: BadReason::Degenerate,
    }));
    let mut rejected = Vec::new();
    for (p, locus) in analysed {
        let locus = locus?;
        if locus.is_smooth() {
            rejected.push(p);
        } else {
            certified_bad.push(BadPrime {
                prime: p,
                reason: BadReason::Singular(locus),
            });
        }
    }
    certified_bad.sort_by(|a, b| a.prime.cmp(&b.prime));
    Ok(BadPrimeReport {
        certified_bad,
        rejected,
        trial_division_primes: found.iter().map(|(p, _)| *p).collect(),
        external_primes: extra_primes.to_vec(),
        rho_primes,
        candidate_integer: cand,
        cofactor,
        search_bound,
    })
}
