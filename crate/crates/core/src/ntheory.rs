//! Elementary integer number theory: valuations, Jacobi symbols, sieving,
//! probable-prime testing and trial division.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Exponent of `p` in the nonzero integer `n`.
pub fn valuation_int(n: &BigInt, p: &BigUint) -> u64 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p.clone());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Removes all factors of `p`, returning `(v, n / p^v)`.
pub fn split_valuation(n: &BigInt, p: &BigUint) -> (u64, BigInt) {
    let v = valuation_int(n, p);
    let pv = BigInt::from(p.pow(v as u32));
    (v, n / pv)
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    assert!(
        n.is_positive() && n.is_odd(),
        "Jacobi symbol needs odd positive modulus"
    );
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t = 1;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Miller-Rabin with `rounds` bases drawn from a fixed-seed generator,
/// after trial division by small primes.
pub fn is_probable_prime(n: &BigUint, rounds: u32) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for p in primes_up_to(200) {
        let p = BigUint::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let nm1 = n - 1u32;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9);
    let range = n - 3u32;
    'witness: for _ in 0..rounds {
        let a = rng.gen_biguint_below(&range) + 2u32;
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Convenience wrapper for machine-sized primes.
pub fn is_prime_u64(n: u64) -> bool {
    is_probable_prime(&BigUint::from(n), 32)
}

/// Exact test for a perfect square (negative numbers are not squares).
pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// Trial division of `|n|` by every prime in `primes`.
///
/// Returns the prime factors found, with multiplicity, and the cofactor.
pub fn trial_divide(n: &BigInt, primes: &[u64]) -> (Vec<(u64, u32)>, BigUint) {
    let mut rest = n.abs().to_biguint().expect("absolute value");
    let mut found = Vec::new();
    for &p in primes {
        if rest.is_one() {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&BigUint::from(p));
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            found.push((p, e));
        }
    }
    (found, rest)
}

/// Inverse of `a` modulo `m` (`gcd(a, m) = 1` required).
pub fn inv_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.mod_floor(m).extended_gcd(m);
    assert!(g.gcd.is_one(), "not invertible");
    g.x.mod_floor(m)
}

/// A nontrivial factor of the odd composite `n` by Brent's variant of
/// Pollard rho, or `None` once `budget` iterations are spent.
pub fn pollard_brent(n: &BigUint, budget: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0005_eed0_fa11);
    let mut spent = 0u64;
    let one = BigUint::one();
    while spent < budget {
        let c = rng.gen_biguint_below(&(n - 1u32)) + 1u32;
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = rng.gen_biguint_below(n);
        let m = 128u64;
        let (mut r, mut q) = (1u64, BigUint::one());
        let (mut x, mut ys) = (y.clone(), y.clone());
        let mut g = one.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += m;
            }
            spent += r;
            r *= 2;
            if spent > budget {
                return None;
            }
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

/// Prime factorisation of `n > 0`: trial division by small primes, then
/// Pollard rho. Composite parts that resist are returned in the second
/// component.
pub fn factor(n: &BigUint, rho_budget: u64) -> (Vec<(BigUint, u32)>, Vec<BigUint>) {
    let (small, rest) = trial_divide(&BigInt::from(n.clone()), &primes_up_to(10_000));
    let mut primes: Vec<BigUint> = Vec::new();
    for (p, e) in small {
        primes.extend(std::iter::repeat_n(BigUint::from(p), e as usize));
    }
    let mut stuck = Vec::new();
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m, 64) {
            primes.push(m);
            continue;
        }
        match pollard_brent(&m, rho_budget) {
            Some(d) => {
                stack.push(&m / &d);
                stack.push(d);
            }
            None => stuck.push(m),
        }
    }
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    stuck.sort();
    (out, stuck)
}

/// Distinct prime divisors of `n != 0`; panics if factoring stalls.
pub fn prime_divisors(n: &BigInt) -> Vec<BigUint> {
    let (f, stuck) = factor(&n.abs().to_biguint().unwrap(), 1 << 24);
    assert!(stuck.is_empty(), "could not factor {}", n);
    f.into_iter().map(|(p, _)| p).collect()
}

pub fn to_u64(n: &BigUint) -> Option<u64> {
    n.to_u64()
}

#[cfg(test)]
mod tests {
    #[test]
    fn rho_splits_semiprime() {
        let n = BigUint::from(6902849u64) * BigUint::from(6902849u64) * BigUint::from(104388233u64);
        let (f, stuck) = factor(&n, 1 << 20);
        assert!(stuck.is_empty());
        assert_eq!(
            f,
            vec![(BigUint::from(6902849u64), 2), (BigUint::from(104388233u64), 1)]
        );
        assert_eq!(
            prime_divisors(&BigInt::from(-360)),
            vec![2u32, 3, 5].into_iter().map(BigUint::from).collect::<Vec<_>>()
        );
    }

    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(valuation_int(&BigInt::from(357008), &BigUint::from(2u32)), 4);
        assert_eq!(valuation_int(&BigInt::from(-5), &BigUint::from(2u32)), 0);
        assert_eq!(
            split_valuation(&BigInt::from(-72), &BigUint::from(3u32)),
            (2, BigInt::from(-8))
        );
    }

    #[test]
    fn jacobi_matches_euler_criterion() {
        for p in [3i64, 5, 7, 11, 13, 101] {
            for a in -30i64..30 {
                let e = BigInt::from(a).modpow(&BigInt::from((p - 1) / 2), &BigInt::from(p));
                let expect = if e.is_zero() {
                    0
                } else if e.is_one() {
                    1
                } else {
                    -1
                };
                assert_eq!(jacobi(&BigInt::from(a), &BigInt::from(p)), expect, "a={} p={}", a, p);
            }
        }
    }

    #[test]
    fn primality() {
        let large = "2616678388926286398002864469014842817095009312844790479";
        assert!(is_probable_prime(&large.parse().unwrap(), 64));
        assert!(!is_probable_prime(&BigUint::from(561u32), 64));
        assert!(is_prime_u64(104388233));
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn trial_division_and_squares() {
        let (f, rest) = trial_divide(&BigInt::from(-2 * 2 * 3 * 1009), &primes_up_to(100));
        assert_eq!(f, vec![(2, 2), (3, 1)]);
        assert_eq!(rest, BigUint::from(1009u32));
        assert!(is_perfect_square(&BigInt::from(4)));
        assert!(!is_perfect_square(&BigInt::from(5204)));
        assert!(!is_perfect_square(&BigInt::from(-4)));
    }
}
