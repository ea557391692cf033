//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistk3::brauer::{check_2adic_lemma, check_real_lemma};
use twistk3::divisor::{BiForm22, DerivedSurfaces};
use twistk3::local::{hilbert_symbol, LocalInvariant, Place, DEFAULT_PRECISION};
use twistk3::pipeline::{
    parse_prime_list, parse_table, run_verdict, run_x2_examples, verify_table, VerdictOptions, BUNDLED_DIVISOR,
    BUNDLED_EXTRA_PRIMES, BUNDLED_TABLE, TRIAL_BOUND,
};
use twistk3::points::{weighted_point_count, PlaceSet};
use twistk3::poly::{resultant_uni, HomPoly, Monomial, UniPoly};
use twistk3::smoothness::{bad_prime_candidates, is_smooth_sextic, BadReason};
use twistk3::sod::{identity_check, verify_mutation_identity, PicClass};
use twistk3::{QUniPoly, ZPoly};

mod common;
use common::{exhaustive_count, small_primes_of, solvable_over_qp, Dense};

/// Reference equations of the two surfaces, transcribed in TeX.
/// The unsubscripted `y` in the second term is `y_1` (degree forces it).
const PRINTED_X1: &str = r"-4x_0^6 - 308x_0^5x_1 - 190x_0^4x_1^2 - 278x_0^3x_1^3 - 203x_0^2x_1^4 - 40x_0x_1^5 - 28x_1^6
    + 18x_0^5x_2 + 460x_0^4x_1x_2 + 276x_0^3x_1^2x_2 + 474x_0^2x_1^3x_2 + 40x_0x_1^4x_2 +
    98x_1^5x_2 - 25x_0^4x_2^2 - 820x_0^3x_1x_2^2 - 247x_0^2x_1^2x_2^2 - 374x_0x_1^3x_2^2 -
    2x_1^4x_2^2 + 20x_0^3x_2^3 + 652x_0^2x_1x_2^3 + 14x_0x_1^2x_2^3 + 270x_1^3x_2^3 -
    20x_0^2x_2^4 - 562x_0x_1x_2^4 - 105x_1^2x_2^4 - 8x_0x_2^5 + 166x_1x_2^5 - 4x_2^6";
const PRINTED_X2: &str = r"236y_0^6 - 740y_0^5y + 1268y_0^4y_1^2 - 1092y_0^3y_1^3 + 624y_0^2y_1^4 - 164y_0y_1^5 +
    32y_1^6 - 616y_0^5y_2+ 416y_0^4y_1y_2 - 96y_0^3y_1^2y_2 - 976y_0^2y_1^3y_2 +
    548y_0y_1^4y_2 - 288y_1^5y_2 + 1236y_0^4y_2^2 - 456y_0^3y_1y_2^2 + 1484y_0^2y_1^2y_2^2-
    356y_0y_1^3y_2^2 + 676y_1^4y_2^2 - 1332y_0^3y_2^3 - 804y_0^2y_1y_2^3 - 372y_0y_1^2y_2^3
    -1024y_1^3y_2^3 + 1036y_0^2y_2^4 + 768y_0y_1y_2^4 + 812y_1^2y_2^4 - 472y_0y_2^5 -
    388y_1y_2^5 + 40y_2^6";

const PRINTED_BAD_PRIMES: [&str; 12] = [
    "2",
    "5",
    "7",
    "307",
    "4591",
    "27077",
    "371857",
    "6902849",
    "104388233",
    "541264119547919951",
    "6097863609641310921149279",
    "2616678388926286398002864469014842817095009312844790479",
];
const SMALL_BAD_PRIMES: [u64; 7] = [2, 5, 7, 307, 4591, 27077, 371857];

/// Rewrites TeX monomials into the crate's canonical text.
fn tex_to_canonical(tex: &str) -> String {
    let s: String = tex.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = String::new();
    let mut chars = s.chars().peekable();
    let mut first = true;
    while chars.peek().is_some() {
        let mut sign = '+';
        if let Some(&c) = chars.peek() {
            if c == '+' || c == '-' {
                sign = c;
                chars.next();
            }
        }
        let mut coeff = String::new();
        while let Some(&c) = chars.peek().filter(|c| c.is_ascii_digit()) {
            coeff.push(c);
            chars.next();
        }
        let mut factors = Vec::new();
        while let Some(&v) = chars.peek().filter(|c| c.is_ascii_alphabetic()) {
            chars.next();
            let mut index = '1';
            if chars.peek() == Some(&'_') {
                chars.next();
                index = chars.next().unwrap();
            }
            let mut f = format!("{}{}", v, index);
            if chars.peek() == Some(&'^') {
                chars.next();
                f.push('^');
                f.push(chars.next().unwrap());
            }
            factors.push(f);
        }
        let mut term = factors.join("*");
        if coeff != "1" && !coeff.is_empty() {
            term = format!("{}*{}", coeff, term);
        }
        match (first, sign) {
            (true, '-') => out.push('-'),
            (true, _) => {}
            (false, c) => out.push_str(&format!(" {} ", c)),
        }
        out.push_str(&term);
        first = false;
    }
    out
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn surfaces() -> DerivedSurfaces {
    DerivedSurfaces::from_divisor(&BiForm22::parse(BUNDLED_DIVISOR).unwrap()).unwrap()
}

fn criterion_equations() -> Outcome {
    let d = surfaces();
    let x1 = format!("w^2 = {}", tex_to_canonical(PRINTED_X1));
    let x2 = format!("w^2 = {}", tex_to_canonical(PRINTED_X2));
    let (a, b) = (d.x1.equation() == x1, d.x2.equation() == x2);
    outcome(a && b, format!("X1 match {}, X2 match {}", a, b))
}

fn criterion_smooth() -> Outcome {
    let d = surfaces();
    let s1 = is_smooth_sextic(&d.x1.g_rational())
        .map(|c| c.smooth())
        .unwrap_or(false);
    let s2 = is_smooth_sextic(&d.x2.g_rational())
        .map(|c| c.smooth())
        .unwrap_or(false);
    outcome(s1 && s2, format!("D1 smooth {}, D2 smooth {}", s1, s2))
}

fn criterion_bad_primes() -> Outcome {
    let d = surfaces();
    let extra = parse_prime_list(BUNDLED_EXTRA_PRIMES).unwrap();
    let r = match bad_prime_candidates(&d.x1.g, TRIAL_BOUND, &extra) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let expected: Vec<BigUint> = PRINTED_BAD_PRIMES.iter().map(|s| s.parse().unwrap()).collect();
    let all = r.primes() == expected && r.complete();
    let small: Vec<u64> = r
        .trial_division_primes
        .iter()
        .copied()
        .filter(|p| !r.rejected.contains(&BigUint::from(*p)))
        .collect();
    let below: Vec<BigUint> = r
        .primes()
        .into_iter()
        .filter(|p| p < &BigUint::from(TRIAL_BOUND))
        .collect();
    let trial = small == SMALL_BAD_PRIMES && below == SMALL_BAD_PRIMES.map(BigUint::from);
    outcome(
        all && trial,
        format!(
            "{} certified, list matches {}, trial division recovers {:?}, rejected {:?}",
            r.primes().len(),
            all,
            small,
            r.rejected.iter().map(|p| p.to_string()).collect::<Vec<_>>()
        ),
    )
}

fn criterion_table() -> Outcome {
    let d = surfaces();
    let rows = parse_table(BUNDLED_TABLE).len();
    let (block, ok) = verify_table(&d, BUNDLED_TABLE);
    let passed = block
        .entries
        .iter()
        .filter(|(k, v)| k == "row" && v.starts_with("PASS"))
        .count();
    outcome(
        ok && rows == 17 && passed == 17,
        format!("{}/{} rows verified", passed, rows),
    )
}

fn criterion_lemmas() -> Outcome {
    let d = surfaces();
    let real = check_real_lemma(&d.x_side).ok();
    let two = check_2adic_lemma(&d.x_side).ok();
    let extra = parse_prime_list(BUNDLED_EXTRA_PRIMES).unwrap();
    let r = match bad_prime_candidates(&d.x1.g, TRIAL_BOUND, &extra) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut nodes = Vec::new();
    let mut hypotheses = true;
    for b in &r.certified_bad {
        if let BadReason::Singular(locus) = &b.reason {
            hypotheses &= locus.node_hypotheses_hold();
            nodes.push(format!("{}:{}", b.prime, locus.points.len()));
        } else if !b.by_convention() {
            hypotheses = false;
        }
    }
    hypotheses &= nodes.len() == r.certified_bad.len() - 1;
    outcome(
        real && two && hypotheses,
        format!("real {}, 2-adic {}, node counts {}", real, two, nodes.join(" ")),
    )
}

fn criterion_verdict() -> Outcome {
    let z = BiForm22::parse(BUNDLED_DIVISOR).unwrap();
    let hints = parse_table(BUNDLED_TABLE)
        .into_iter()
        .map(|r| r.map(|r| (r.place, r.coords)))
        .collect::<Result<Vec<_>, _>>()
        .unwrap();
    let opts = VerdictOptions {
        extra_primes: parse_prime_list(BUNDLED_EXTRA_PRIMES).unwrap(),
        hints,
        ..Default::default()
    };
    let run = match run_verdict(&z, &opts) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let v = &run.verdict;
    let finite_zero = v
        .conclusions
        .iter()
        .filter(|c| !matches!(c.places, PlaceSet::One(Place::Real)))
        .all(|c| c.invariant.is_zero());
    let real_half = v
        .conclusions
        .iter()
        .any(|c| matches!(c.places, PlaceSet::One(Place::Real)) && c.invariant == LocalInvariant::HALF);
    let other = v.conclusions.iter().any(|c| c.places == PlaceSet::OtherFinite);
    let ok =
        v.adelic_points && finite_zero && real_half && other && v.invariant_sum == LocalInvariant::HALF && v.obstructed;
    outcome(
        ok,
        format!(
            "adelic points {}, sum {}, {}",
            v.adelic_points,
            v.invariant_sum,
            run.summary()
        ),
    )
}

fn criterion_examples() -> Outcome {
    let d = surfaces();
    let ex = match run_x2_examples(&d, &[], DEFAULT_PRECISION) {
        Ok(e) => e,
        Err(e) => return outcome(false, e.to_string()),
    };
    let rational = ex
        .rational
        .as_ref()
        .map(|(p, _)| p.coords == [1, 1, 1].map(BigInt::from) && p.wsq.is_zero())
        .unwrap_or(false);
    let two = ex.two_adic.as_ref().map(|(p, ev, root)| {
        let target = BigRational::from_integer(BigInt::from(357008));
        let hensel = root.as_ref().map(|r| r.verify(&target)).unwrap_or(false);
        (
            p.wsq == BigInt::from(357008) && p.coords == [-3, -1, 1].map(BigInt::from),
            ev.invariant == LocalInvariant::HALF,
            hensel,
        )
    });
    let real = ex.real.as_ref().map(|(p, ev)| {
        p.wsq == BigInt::from(5204) && p.coords == [4, 3, 3].map(BigInt::from) && ev.invariant.is_zero()
    });
    let ok = rational && two == Some((true, true, true)) && real == Some(true);
    outcome(
        ok,
        format!(
            "[1,1,1,0] on X2 {}, Q_2 (point, 1/2, hensel) {:?}, R {:?}",
            rational, two, real
        ),
    )
}

fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> (i64, i64) {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-bound..=bound);
    }
    (n, rng.gen_range(1..=bound))
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn criterion_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut failures = Vec::new();

    let mut identities = 0;
    for _ in 0..1000 {
        let [(an, ad), (bn, bd), (cn, cd)] = [0; 3].map(|_| random_rational(&mut rng, 60));
        let (a, b, c) = (q(an, ad), q(bn, bd), q(cn, cd));
        let mut primes = vec![2u64];
        for n in [an, ad, bn, bd, cn, cd] {
            small_primes_of(n, &mut primes);
        }
        primes.sort();
        primes.dedup();
        let mut places: Vec<Place> = primes.into_iter().map(|p| Place::finite(p).unwrap()).collect();
        places.push(Place::Real);
        let h = |x: &BigRational, y: &BigRational, v: &Place| hilbert_symbol(x, y, v).unwrap();
        let mut ok = true;
        let mut product = 1i8;
        for v in &places {
            let ab = h(&a, &b, v);
            ok &= ab == h(&b, &a, v);
            ok &= h(&a, &(&b * &c), v) == ab * h(&a, &c, v);
            ok &= h(&a, &-a.clone(), v) == 1;
            product *= ab;
        }
        // primes dividing only c see units in a and b
        ok &= product == 1;
        identities += ok as usize;
    }
    if identities != 1000 {
        failures.push(format!("identities {}/1000", identities));
    }

    let mut agreed = 0;
    for i in 0..500 {
        let p = [2i64, 3, 5, 7][i % 4];
        let ((an, ad), (bn, bd)) = (random_rational(&mut rng, 50), random_rational(&mut rng, 50));
        let s = hilbert_symbol(&q(an, ad), &q(bn, bd), &Place::finite(p as u64).unwrap()).unwrap();
        agreed += ((s == 1) == solvable_over_qp(an * ad, bn * bd, p)) as usize;
    }
    if agreed != 500 {
        failures.push(format!("solvability oracle {}/500", agreed));
    }

    let mut resultants = 0;
    let random_uni = |rng: &mut ChaCha8Rng, deg: usize| -> QUniPoly {
        let mut cs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9..=9)).collect();
        if cs[deg] == 0 {
            cs[deg] = 1;
        }
        UniPoly::from_ints(&cs)
    };
    for i in 0..200 {
        let (df, dg) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let (mut f, mut g) = (random_uni(&mut rng, df), random_uni(&mut rng, dg));
        if i % 2 == 0 {
            let shared = random_uni(&mut rng, 1);
            f = &f * &shared;
            g = &g * &shared;
        }
        let res = resultant_uni(&f, &g).unwrap();
        resultants += (res.is_zero() == (f.gcd(&g).degree().unwrap_or(0) > 0)) as usize;
    }
    if resultants != 200 {
        failures.push(format!("resultant vs gcd {}/200", resultants));
    }

    let monos = Monomial::all_of_degree(6);
    let mut counts = 0;
    let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];
    for _ in 0..20 {
        let g: ZPoly =
            HomPoly::from_terms(6, monos.iter().map(|m| (BigInt::from(rng.gen_range(-9i64..=9)), m.0))).unwrap();
        let dense = Dense::new(&g);
        counts += primes
            .iter()
            .filter(|&&p| weighted_point_count(&g, p).ok() == Some(exhaustive_count(&dense, p)))
            .count();
    }
    if counts != 220 {
        failures.push(format!("point counts {}/220", counts));
    }

    let ok = failures.is_empty();
    let detail = if ok {
        "1000 identity/product pairs, 500 oracle pairs, 200 resultant pairs, 20 sextics x 11 primes".to_string()
    } else {
        failures.join("; ")
    };
    outcome(ok, detail)
}

fn criterion_sod() -> Outcome {
    let expected: BTreeSet<PicClass> = [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)]
        .into_iter()
        .map(|(a, b)| PicClass::new(a, b))
        .collect();
    let ok = verify_mutation_identity();
    let residual = identity_check().map(|c| c.first.residual == expected && c.second.residual == expected);
    let res_ok = residual.unwrap_or(false);
    outcome(ok && res_ok, format!("identity {}, residual matches {}", ok, res_ok))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("equation reproduction", Duration::from_secs(1), criterion_equations),
        ("smoothness of both sextics", Duration::from_secs(30), criterion_smooth),
        ("bad primes", Duration::from_secs(600), criterion_bad_primes),
        ("local point table", Duration::from_secs(60), criterion_table),
        (
            "lemma checks and node certificates",
            Duration::from_secs(600),
            criterion_lemmas,
        ),
        ("obstruction verdict", Duration::from_secs(600), criterion_verdict),
        ("counterexample points", Duration::from_secs(60), criterion_examples),
        ("property suites", Duration::from_secs(300), criterion_properties),
        ("mutation identity", Duration::from_secs(1), criterion_sod),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed <= *limit;
        failed += !pass as usize;
        println!(
            "{} criterion {}: {} ({:.2}s, limit {}s): {}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            name,
            elapsed.as_secs_f64(),
            limit.as_secs(),
            o.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
