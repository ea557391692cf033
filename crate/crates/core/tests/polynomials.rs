//! Ring laws, evaluation, reduction mod p and the resultant-vs-gcd oracle.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use twistk3::poly::{reduce_mod_p, resultant_uni, HomPoly, Monomial, UniPoly};
use twistk3::{QPoly, QUniPoly};

fn form(degree: u32) -> impl Strategy<Value = QPoly> {
    let monos = Monomial::all_of_degree(degree);
    prop::collection::vec(-6i64..=6, monos.len()).prop_map(move |cs| {
        HomPoly::from_terms(
            degree,
            cs.into_iter()
                .zip(monos.iter())
                .map(|(c, m)| (BigRational::from_integer(c.into()), m.0)),
        )
        .unwrap()
    })
}

fn uni(max_degree: usize) -> impl Strategy<Value = QUniPoly> {
    prop::collection::vec(-9i64..=9, 1..=max_degree + 1).prop_map(|cs| UniPoly::from_ints(&cs))
}

fn point() -> impl Strategy<Value = [BigRational; 3]> {
    prop::array::uniform3((-7i64..=7, 1i64..=5)).prop_map(|a| a.map(|(n, d)| BigRational::new(n.into(), d.into())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(f in form(2), g in form(2), h in form(2), k in form(4)) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        // degree 6 products
        prop_assert_eq!(&(&f * &k) * &f, &f * &(&k * &f));
        prop_assert!((&k - &k).is_zero());
    }

    #[test]
    fn eval_is_a_homomorphism(f in form(3), g in form(3), pt in point()) {
        prop_assert_eq!((&f * &g).eval(&pt), f.eval(&pt) * g.eval(&pt));
        prop_assert_eq!((&f + &g).eval(&pt), f.eval(&pt) + g.eval(&pt));
    }

    #[test]
    fn reduction_commutes_with_ring_operations(
        f in form(3),
        g in form(3),
        p in prop::sample::select(vec![2u32, 3, 5, 7, 11, 101]),
    ) {
        let p = BigUint::from(p);
        let (rf, rg) = (reduce_mod_p(&f, &p).unwrap(), reduce_mod_p(&g, &p).unwrap());
        let sum = reduce_mod_p(&(&f + &g), &p).unwrap();
        let prod = reduce_mod_p(&(&f * &g), &p).unwrap();
        for m in Monomial::all_of_degree(3) {
            prop_assert_eq!(sum.coeff(m.0), (rf.coeff(m.0) + rg.coeff(m.0)) % &p);
        }
        for m in Monomial::all_of_degree(6) {
            let mut expected = BigUint::zero();
            for a in Monomial::all_of_degree(3) {
                for b in Monomial::all_of_degree(3) {
                    if a.mul(&b) == m {
                        expected += rf.coeff(a.0) * rg.coeff(b.0);
                    }
                }
            }
            prop_assert_eq!(prod.coeff(m.0), expected % &p);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn resultant_vanishes_iff_common_factor(
        f in uni(4),
        g in uni(4),
        shared in uni(2),
        force_common in any::<bool>(),
    ) {
        prop_assume!(!f.is_zero() && !g.is_zero() && !shared.is_zero());
        let (f, g) = if force_common { (&f * &shared, &g * &shared) } else { (f, g) };
        let res = resultant_uni(&f, &g).unwrap();
        let common = f.gcd(&g).degree().unwrap_or(0) > 0;
        prop_assert_eq!(res.is_zero(), common);
    }

    #[test]
    fn resultant_antisymmetry(f in uni(4), g in uni(4)) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let sign = if (f.degree().unwrap() * g.degree().unwrap()) % 2 == 1 { -1 } else { 1 };
        let fg = resultant_uni(&f, &g).unwrap();
        let gf = resultant_uni(&g, &f).unwrap();
        prop_assert_eq!(fg, gf * BigRational::from_integer(BigInt::from(sign)));
    }
}
