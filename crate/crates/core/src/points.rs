//! Points of double sextics over finite fields, Q_p, R and Q; adelic
//! existence and the Brauer-Manin tally.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Signed;
use rayon::prelude::*;

use crate::brauer::{ConstantClass, WeightedPoint};
use crate::error::{Error, Result};
use crate::local::{LocalInvariant, Place, DEFAULT_PRECISION};
use crate::ntheory::{is_perfect_square, is_prime_u64, primes_up_to};
use crate::poly::{reduce_int_mod_p, Fp};
use crate::smoothness::{projective_points_small, Eliminator};
use crate::ZPoly;

/// Largest prime accepted by the point counter.
pub const MAX_COUNT_PRIME: u64 = 1 << 16;

/// Below this bound every prime is searched for a local point; above it,
/// good primes have points by the Weil bound.
pub const WEIL_THRESHOLD: u64 = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub height_bound: u64,
    pub padic_precision: u32,
    pub prime_enumeration_bound: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            height_bound: 4,
            padic_precision: DEFAULT_PRECISION,
            prime_enumeration_bound: WEIL_THRESHOLD,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.height_bound == 0 || self.padic_precision == 0 || self.prime_enumeration_bound == 0 {
            return Err(Error::invalid("search bounds must be positive"));
        }
        Ok(())
    }
}

/// Primitive integer triples up to sign, by max-norm shell and then
/// lexicographically in `[-n, n]^3`; of `v` and `-v` the first met is kept.
pub fn primitive_triples(height: u64) -> impl Iterator<Item = [i64; 3]> {
    let h = height as i64;
    (1..=h).flat_map(|n| {
        (-n..=n)
            .flat_map(move |a| (-n..=n).flat_map(move |b| (-n..=n).map(move |c| [a, b, c])))
            .filter(move |t| {
                t.iter().map(|c| c.abs()).max() == Some(n)
                    && t.iter().find(|c| **c != 0).is_some_and(|c| *c < 0)
                    && t.iter().fold(0i64, |acc, c| acc.gcd(c)) == 1
            })
    })
}

fn to_big(t: [i64; 3]) -> [BigInt; 3] {
    t.map(BigInt::from)
}

/// Number of points of `w^2 = g` in P(1,1,1,3)(F_p), for an odd prime `p`
/// whose reduction is smooth.
pub fn count_points_mod_p(g: &ZPoly, p: u64) -> Result<u64> {
    if p == 2 || !is_prime_u64(p) {
        return Err(Error::invalid(format!("{} is not an odd prime", p)));
    }
    if p > MAX_COUNT_PRIME {
        return Err(Error::invalid(format!("{} is too large to count points", p)));
    }
    let locus = Eliminator::new(g.clone()).locus_mod_p(&BigUint::from(p))?;
    if !locus.is_smooth() {
        return Err(Error::invalid(format!("bad reduction at {}", p)));
    }
    weighted_point_count(g, p)
}

/// `sum over P^2(F_p) of 1 + chi(g)`, branch points counted once; no
/// smoothness check.
pub fn weighted_point_count(g: &ZPoly, p: u64) -> Result<u64> {
    if p == 2 {
        // squaring is bijective on F_2, so every plane point has exactly one w
        return Ok(7);
    }
    let field = Fp::from_u64(p);
    let form = reduce_int_mod_p(g, &field)
        .small_evaluator()
        .ok_or_else(|| Error::invalid("prime too large"))?;
    let total: i64 = projective_points_small(p)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&pt| 1 + crate::poly::modp::legendre_small(form.eval(pt), p) as i64)
        .sum();
    Ok(total as u64)
}

/// `|N - 1 - p^2| <= 22 p` for a smooth double sextic.
pub fn within_weil_bound(count: u64, p: u64) -> bool {
    let dev = count as i128 - 1 - (p as i128) * (p as i128);
    dev.abs() <= 22 * p as i128
}

/// First triple in search order lying on the surface over Q_p (or R).
pub fn find_local_point(g: &ZPoly, place: &Place, config: &SearchConfig) -> Result<WeightedPoint> {
    config.validate()?;
    for t in primitive_triples(config.height_bound) {
        let pt = WeightedPoint::new(to_big(t), g)?;
        if pt.lies_over(place)? {
            return Ok(pt);
        }
    }
    Err(Error::NotFound(format!(
        "no point over {} up to height {}",
        place, config.height_bound
    )))
}

pub fn find_qp_point(g: &ZPoly, p: &BigUint, config: &SearchConfig) -> Result<WeightedPoint> {
    find_local_point(g, &Place::Finite(p.clone()), config)
}

/// All rational points `[x, w]` with `x` up to the height bound.
pub fn find_rational_points(g: &ZPoly, config: &SearchConfig) -> Result<Vec<WeightedPoint>> {
    config.validate()?;
    let mut out = Vec::new();
    for t in primitive_triples(config.height_bound) {
        let pt = WeightedPoint::new(to_big(t), g)?;
        if !pt.wsq.is_negative() && is_perfect_square(&pt.wsq) {
            out.push(pt);
        }
    }
    Ok(out)
}

/// Checks that an explicitly given triple lies on the surface at `place`.
pub fn verify_local_point(g: &ZPoly, coords: [BigInt; 3], place: &Place) -> Result<Option<WeightedPoint>> {
    let pt = WeightedPoint::new(coords, g)?;
    Ok(pt.lies_over(place)?.then_some(pt))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaceStatus {
    Point(WeightedPoint),
    NotFound,
}

#[derive(Clone, Debug)]
pub struct AdelicReport {
    pub per_place: BTreeMap<Place, PlaceStatus>,
    /// Good primes at or above this have points by the Weil bound.
    pub weil_threshold: u64,
    pub has_adelic_points: bool,
}

impl AdelicReport {
    pub fn point(&self, place: &Place) -> Option<&WeightedPoint> {
        match self.per_place.get(place) {
            Some(PlaceStatus::Point(p)) => Some(p),
            _ => None,
        }
    }

    pub fn failing_places(&self) -> Vec<&Place> {
        self.per_place
            .iter()
            .filter(|(_, s)| **s == PlaceStatus::NotFound)
            .map(|(p, _)| p)
            .collect()
    }
}

/// Local points at the real place, every prime below the enumeration
/// bound, and every bad prime. `hints` are tried before searching.
pub fn adelic_existence(
    g: &ZPoly,
    bad_primes: &[BigUint],
    config: &SearchConfig,
    hints: &[(Place, [BigInt; 3])],
) -> Result<AdelicReport> {
    config.validate()?;
    let threshold = config.prime_enumeration_bound.max(WEIL_THRESHOLD);
    let mut places: Vec<Place> = vec![Place::Real];
    places.extend(
        primes_up_to(threshold - 1)
            .into_iter()
            .map(|p| Place::Finite(BigUint::from(p))),
    );
    places.extend(bad_primes.iter().map(|p| Place::Finite(p.clone())));
    places.sort();
    places.dedup();
    let results: Vec<(Place, Result<PlaceStatus>)> = places
        .par_iter()
        .map(|place| {
            let hinted = hints
                .iter()
                .filter(|(p, _)| p == place)
                .map(|(_, c)| verify_local_point(g, c.clone(), place))
                .find_map(|r| r.transpose());
            let status = match hinted {
                Some(Ok(pt)) => Ok(PlaceStatus::Point(pt)),
                Some(Err(e)) => Err(e),
                None => match find_local_point(g, place, config) {
                    Ok(pt) => Ok(PlaceStatus::Point(pt)),
                    Err(Error::NotFound(_)) => Ok(PlaceStatus::NotFound),
                    Err(e) => Err(e),
                },
            };
            (place.clone(), status)
        })
        .collect();
    let mut per_place = BTreeMap::new();
    for (place, status) in results {
        per_place.insert(place, status?);
    }
    let has_adelic_points = per_place.values().all(|s| matches!(s, PlaceStatus::Point(_)));
    Ok(AdelicReport {
        per_place,
        weil_threshold: threshold,
        has_adelic_points,
    })
}

/// A set of places sharing one conclusion.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PlaceSet {
    One(Place),
    /// Every prime not listed elsewhere.
    OtherFinite,
}

impl fmt::Display for PlaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceSet::One(p) => write!(f, "{}", p),
            PlaceSet::OtherFinite => f.write_str("other finite"),
        }
    }
}

/// The constant value of the invariant on all local points at some places.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceConclusion {
    pub places: PlaceSet,
    pub invariant: LocalInvariant,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionVerdict {
    pub adelic_points: bool,
    pub conclusions: Vec<PlaceConclusion>,
    pub invariant_sum: LocalInvariant,
    pub obstructed: bool,
}

/// Sums the constant invariants (after twisting by `beta`). Each
/// `PlaceConclusion` must hold for every local point at its places.
pub fn bm_verdict(
    report: &AdelicReport,
    conclusions: Vec<Result<PlaceConclusion>>,
    beta: &ConstantClass,
) -> Result<ObstructionVerdict> {
    let mut out = Vec::with_capacity(conclusions.len());
    for c in conclusions {
        out.push(c?);
    }
    if !out.iter().any(|c| c.places == PlaceSet::OtherFinite) {
        return Err(Error::CannotConclude("no conclusion for the remaining primes".into()));
    }
    // beta may live at places covered only by `OtherFinite`.
    for place in beta.places() {
        if !out.iter().any(|c| c.places == PlaceSet::One(place.clone())) {
            let base = out
                .iter()
                .find(|c| c.places == PlaceSet::OtherFinite)
                .map(|c| c.invariant)
                .unwrap_or_default();
            out.push(PlaceConclusion {
                places: PlaceSet::One(place.clone()),
                invariant: base,
                reason: "as other finite places".into(),
            });
        }
    }
    for c in out.iter_mut() {
        if let PlaceSet::One(p) = &c.places {
            c.invariant = beta.twist(p, c.invariant);
        }
    }
    let other = out
        .iter()
        .find(|c| c.places == PlaceSet::OtherFinite)
        .map(|c| c.invariant)
        .unwrap_or_default();
    if !other.is_zero() {
        return Err(Error::CannotConclude(
            "nonzero invariant at infinitely many places".into(),
        ));
    }
    let invariant_sum: LocalInvariant = out.iter().map(|c| c.invariant).sum();
    out.sort_by(|a, b| a.places.cmp(&b.places));
    Ok(ObstructionVerdict {
        adelic_points: report.has_adelic_points,
        obstructed: report.has_adelic_points && !invariant_sum.is_zero(),
        invariant_sum,
        conclusions: out,
    })
}
