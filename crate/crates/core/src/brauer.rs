//! Hilbert-symbol representatives of the Brauer class on a double sextic,
//! evaluation at local points, and the coefficient lemmas that pin the
//! invariant at the real place and at 2.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::divisor::{minors, QuadricSextet, FORM_NAMES, QUADRATIC_MONOMIALS};
use crate::error::{Error, Result};
use crate::local::{
    hilbert_symbol, invariant_of_symbol, is_square_local, padic_valuation, LocalInvariant, Place, Valuation,
};
use crate::poly::leading_principal_minors;
use crate::smoothness::ModPLocus;
use crate::QPoly;

/// The six pairs `(-M_F, A), (-M_D, A), (-M_F, D), (-M_A, D), (-M_D, F),
/// (-M_A, F)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RepLabel {
    MfA,
    MdA,
    MfD,
    MaD,
    MdF,
    MaF,
}

impl RepLabel {
    pub const ALL: [RepLabel; 6] = [
        RepLabel::MfA,
        RepLabel::MdA,
        RepLabel::MfD,
        RepLabel::MaD,
        RepLabel::MdF,
        RepLabel::MaF,
    ];

    /// Representative keyed to the coordinate `x_i` being a unit:
    /// `(B^2 - 4AD, A)`, `(E^2 - 4DF, D)`, `(C^2 - 4AF, F)`.
    pub fn keyed(i: usize) -> RepLabel {
        [RepLabel::MfA, RepLabel::MaD, RepLabel::MdF][i]
    }
}

impl fmt::Display for RepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RepLabel::MfA => "(-M_F, A)",
            RepLabel::MdA => "(-M_D, A)",
            RepLabel::MfD => "(-M_F, D)",
            RepLabel::MaD => "(-M_A, D)",
            RepLabel::MdF => "(-M_D, F)",
            RepLabel::MaF => "(-M_A, F)",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolRep {
    pub left: QPoly,
    pub right: QPoly,
    pub label: RepLabel,
}

pub fn brauer_reps(q: &QuadricSextet) -> Vec<SymbolRep> {
    let m = minors(q);
    let (neg_a, neg_d, neg_f) = (-&m.m_a, -&m.m_d, -&m.m_f);
    RepLabel::ALL
        .iter()
        .map(|&label| {
            let (left, right) = match label {
                RepLabel::MfA => (&neg_f, q.a()),
                RepLabel::MdA => (&neg_d, q.a()),
                RepLabel::MfD => (&neg_f, q.d()),
                RepLabel::MaD => (&neg_a, q.d()),
                RepLabel::MdF => (&neg_d, q.f()),
                RepLabel::MaF => (&neg_a, q.f()),
            };
            SymbolRep {
                left: left.clone(),
                right: right.clone(),
                label,
            }
        })
        .collect()
}

/// `[x0, x1, x2, w]` on `w^2 = g`, recorded through `wsq = g(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPoint {
    pub coords: [BigInt; 3],
    pub wsq: BigInt,
}

impl WeightedPoint {
    /// Makes the triple primitive with nonnegative first nonzero entry, and
    /// evaluates `g`.
    pub fn new(coords: [BigInt; 3], g: &crate::ZPoly) -> Result<Self> {
        let content = coords.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if content.is_zero() {
            return Err(Error::invalid("zero vector is not a projective point"));
        }
        let coords = coords.map(|c| c / &content);
        let wsq = g.eval(&coords);
        Ok(WeightedPoint { coords, wsq })
    }

    pub fn from_i64(coords: [i64; 3], g: &crate::ZPoly) -> Result<Self> {
        Self::new(coords.map(BigInt::from), g)
    }

    pub fn w_is_zero(&self) -> bool {
        self.wsq.is_zero()
    }

    /// Whether some `w` in the completion satisfies `w^2 = wsq`.
    pub fn lies_over(&self, place: &Place) -> Result<bool> {
        if self.wsq.is_zero() {
            return Ok(true);
        }
        is_square_local(&BigRational::from_integer(self.wsq.clone()), place)
    }

    fn rational_coords(&self) -> [BigRational; 3] {
        std::array::from_fn(|i| BigRational::from_integer(self.coords[i].clone()))
    }
}

impl fmt::Display for WeightedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.coords;
        if self.wsq.is_zero() {
            write!(f, "[{}, {}, {}, 0]", a, b, c)
        } else {
            write!(f, "[{}, {}, {}, sqrt({})]", a, b, c, self.wsq)
        }
    }
}

/// Value of the class at a local point, with the representative used.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub rep: RepLabel,
    pub left: BigRational,
    pub right: BigRational,
    pub symbol: i8,
    pub invariant: LocalInvariant,
    /// Number of representatives evaluated and found to agree.
    pub agreeing: usize,
}

fn selection_order(pt: &WeightedPoint, place: &Place) -> Vec<RepLabel> {
    let unit = match place {
        Place::Finite(p) => {
            let p = BigInt::from(p.clone());
            pt.coords.iter().position(|c| !(c % &p).is_zero()).unwrap_or(0)
        }
        Place::Real => 0,
    };
    let mut order = vec![RepLabel::keyed(unit)];
    order.extend((0..3).filter(|&i| i != unit).map(RepLabel::keyed));
    order.extend(
        RepLabel::ALL
            .iter()
            .filter(|l| !order.contains(l))
            .copied()
            .collect::<Vec<_>>(),
    );
    order
}

/// Evaluates the class at `pt` over the completion at `place`.
///
/// Every representative with both entries nonzero at the point is
/// evaluated; disagreement is reported as an error.
pub fn eval_invariant(reps: &[SymbolRep], pt: &WeightedPoint, place: &Place) -> Result<Evaluation> {
    if !pt.lies_over(place)? {
        return Err(Error::invalid(format!(
            "{} is not a point over the completion at {}",
            pt, place
        )));
    }
    let x = pt.rational_coords();
    let mut chosen: Option<Evaluation> = None;
    let mut agreeing = 0;
    for label in selection_order(pt, place) {
        let Some(rep) = reps.iter().find(|r| r.label == label) else {
            continue;
        };
        let (l, r) = (rep.left.eval(&x), rep.right.eval(&x));
        if l.is_zero() || r.is_zero() {
            continue;
        }
        let symbol = hilbert_symbol(&l, &r, place)?;
        match &chosen {
            None => {
                chosen = Some(Evaluation {
                    rep: label,
                    left: l,
                    right: r,
                    symbol,
                    invariant: invariant_of_symbol(symbol),
                    agreeing: 0,
                })
            }
            Some(c) if c.symbol != symbol => {
                return Err(Error::InconsistentRepresentatives(format!(
                    "{} gives {} but {} gives {} at {} over {}",
                    c.rep, c.symbol, label, symbol, pt, place
                )))
            }
            Some(_) => {}
        }
        agreeing += 1;
    }
    let mut ev = chosen.ok_or(Error::Indeterminate)?;
    ev.agreeing = agreeing;
    Ok(ev)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub label: String,
    pub holds: bool,
}

/// A list of named conditions; the lemma applies when all hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub conditions: Vec<Condition>,
}

impl LemmaReport {
    pub fn ok(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaChecklist {
    pub real: LemmaReport,
    pub two_adic: LemmaReport,
}

impl LemmaChecklist {
    pub fn new(q: &QuadricSextet) -> Self {
        LemmaChecklist {
            real: check_real_lemma(q),
            two_adic: check_2adic_lemma(q),
        }
    }

    pub fn real_ok(&self) -> bool {
        self.real.ok()
    }

    pub fn two_adic_ok(&self) -> bool {
        self.two_adic.ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Definiteness {
    Positive,
    Negative,
}

/// Symmetric matrix `2 * Gram` of a ternary quadratic form.
fn gram2(q: &QPoly) -> Vec<Vec<BigRational>> {
    let c = |e: [u32; 3]| q.coeff(e);
    let two = BigRational::from_integer(2.into());
    vec![
        vec![&two * c([2, 0, 0]), c([1, 1, 0]), c([1, 0, 1])],
        vec![c([1, 1, 0]), &two * c([0, 2, 0]), c([0, 1, 1])],
        vec![c([1, 0, 1]), c([0, 1, 1]), &two * c([0, 0, 2])],
    ]
}

/// Sylvester's criterion on the leading principal minors.
pub fn is_definite(q: &QPoly, kind: Definiteness) -> bool {
    let mut m = gram2(q);
    if kind == Definiteness::Negative {
        m = m.into_iter().map(|row| row.into_iter().map(|x| -x).collect()).collect();
    }
    leading_principal_minors(&m).iter().all(|d| d.is_positive())
}

/// A, D, F negative definite and B, C, E positive definite.
pub fn check_real_lemma(q: &QuadricSextet) -> LemmaReport {
    use Definiteness::*;
    let expected = [Negative, Positive, Positive, Negative, Positive, Negative];
    let conditions = q
        .forms
        .iter()
        .zip(expected)
        .zip(FORM_NAMES)
        .map(|((form, kind), name)| Condition {
            label: format!(
                "{} {} definite",
                name,
                if kind == Positive { "positive" } else { "negative" }
            ),
            holds: is_definite(form, kind),
        })
        .collect();
    LemmaReport { conditions }
}

/// Slots (1-based, `x0^2, x0x1, x0x2, x1^2, x1x2, x2^2`) whose coefficient
/// must be a 2-adic unit in A..F; all other coefficients must be even.
pub const TWO_ADIC_UNIT_SLOTS: [usize; 6] = [1, 1, 6, 4, 4, 6];

pub fn check_2adic_lemma(q: &QuadricSextet) -> LemmaReport {
    let two = BigUint::from(2u32);
    let mut conditions = Vec::with_capacity(36);
    for (form, name) in FORM_NAMES.iter().enumerate() {
        for slot in 0..6 {
            let c = q.slot_coeff(form, slot);
            let v = padic_valuation(&c, &two);
            let unit = TWO_ADIC_UNIT_SLOTS[form] == slot + 1;
            let (label, holds) = if unit {
                (format!("v2({}_{}) = 0", name, slot + 1), v == Valuation::Finite(0))
            } else {
                let positive = match v {
                    Valuation::Infinity => true,
                    Valuation::Finite(k) => k > 0,
                };
                (format!("v2({}_{}) > 0", name, slot + 1), positive)
            };
            conditions.push(Condition { label, holds });
        }
    }
    debug_assert_eq!(QUADRATIC_MONOMIALS.len() * 6, conditions.len());
    LemmaReport { conditions }
}

/// Reduction type of the surface at an odd prime.
#[derive(Clone, Copy, Debug)]
pub enum ReductionStatus<'a> {
    Good,
    /// Bad reduction; the singular locus, when available, certifies the
    /// hypotheses for constancy of evaluation.
    Bad(Option<&'a ModPLocus>),
}

/// Invariant of the class on all points over Q_p, for odd p.
///
/// Good reduction forces 0. At a bad prime whose reduction has fewer than
/// 8 singular points, all nodes, evaluation is constant, so one sample
/// point determines it.
pub fn conclude_finite_place(
    place: &Place,
    status: ReductionStatus<'_>,
    sample: Option<LocalInvariant>,
) -> Result<LocalInvariant> {
    let p = place.prime().ok_or_else(|| Error::invalid("finite place required"))?;
    if p == &BigUint::from(2u32) {
        return Err(Error::invalid("p = 2 is handled by the 2-adic lemma"));
    }
    match status {
        ReductionStatus::Good => Ok(LocalInvariant::ZERO),
        ReductionStatus::Bad(None) => Err(Error::CannotConclude(format!("no singular-locus certificate at {}", p))),
        ReductionStatus::Bad(Some(locus)) => {
            if &locus.prime != p {
                return Err(Error::invalid("certificate is for a different prime"));
            }
            if !locus.node_hypotheses_hold() {
                return Err(Error::CannotConclude(format!(
                    "reduction at {} is not known to have fewer than 8 nodes",
                    p
                )));
            }
            sample.ok_or_else(|| Error::CannotConclude(format!("no sample point at {}", p)))
        }
    }
}

/// A constant class in Br(Q), given by its nonzero local invariants.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstantClass {
    entries: Vec<(Place, LocalInvariant)>,
}

impl ConstantClass {
    pub fn trivial() -> Self {
        ConstantClass::default()
    }

    /// Fails unless the places are distinct and the invariants sum to 0.
    pub fn new(entries: Vec<(Place, LocalInvariant)>) -> Result<Self> {
        let mut places: Vec<&Place> = entries.iter().map(|(p, _)| p).collect();
        places.sort();
        places.dedup();
        if places.len() != entries.len() {
            return Err(Error::invalid("repeated place in constant class"));
        }
        let total: LocalInvariant = entries.iter().map(|(_, i)| *i).sum();
        if !total.is_zero() {
            return Err(Error::invalid("local invariants of a global class must sum to 0"));
        }
        let entries = entries.into_iter().filter(|(_, i)| !i.is_zero()).collect();
        Ok(ConstantClass { entries })
    }

    pub fn inv_at(&self, place: &Place) -> LocalInvariant {
        self.entries
            .iter()
            .find(|(p, _)| p == place)
            .map(|(_, i)| *i)
            .unwrap_or(LocalInvariant::ZERO)
    }

    /// Invariant of `beta^{-1} alpha` given that of `alpha`.
    pub fn twist(&self, place: &Place, inv: LocalInvariant) -> LocalInvariant {
        inv + self.inv_at(place)
    }

    pub fn places(&self) -> impl Iterator<Item = &Place> {
        self.entries.iter().map(|(p, _)| p)
    }
}
