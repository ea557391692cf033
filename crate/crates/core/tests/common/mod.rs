//! Brute-force oracles shared by the test binaries.
#![allow(dead_code)]

use twistk3::ZPoly;

pub fn small_primes_of(mut n: i64, out: &mut Vec<u64>) {
    n = n.abs();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d as u64);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n as u64);
    }
}

/// Drops even powers of `p` from `n`; the symbol only sees `n` up to squares.
pub fn strip_squares(mut n: i64, p: i64) -> i64 {
    while n % (p * p) == 0 {
        n /= p * p;
    }
    n
}

pub fn val(mut n: i64, p: i64, cap: u32) -> u32 {
    if n == 0 {
        return cap;
    }
    let mut v = 0;
    while n % p == 0 && v < cap {
        n /= p;
        v += 1;
    }
    v
}

/// Decides whether `z^2 = a x^2 + b y^2` has a nonzero solution over Q_p.
///
/// After stripping squares the valuations of `a` and `b` are at most 1, so
/// any primitive solution has a partial derivative of valuation at most
/// `v(2) + 1`. Searching primitive residues modulo `p^n` with
/// `n = 2 (v(2) + 1) + 1` and applying Hensel's lemma is therefore exact.
pub fn solvable_over_qp(a: i64, b: i64, p: i64) -> bool {
    let (a, b) = (strip_squares(a, p), strip_squares(b, p));
    let n: u32 = if p == 2 { 5 } else { 3 };
    let m = p.pow(n);
    let (a, b) = (a.rem_euclid(m), b.rem_euclid(m));
    let form = |v: [i64; 3], modulus: i64| (v[2] * v[2] - a * v[0] * v[0] - b * v[1] * v[1]).rem_euclid(modulus);
    for unit in 0..3 {
        // one coordinate fixed to 1, the other two lifted digit by digit
        let mut level = vec![(0i64, 0i64)];
        let mut pk = 1;
        for _ in 0..n {
            let next_pk = pk * p;
            let mut next = Vec::new();
            for &(u, w) in &level {
                for s in 0..p {
                    for t in 0..p {
                        let (u2, w2) = (u + pk * s, w + pk * t);
                        if form(embed(unit, u2, w2), next_pk) == 0 {
                            next.push((u2, w2));
                        }
                    }
                }
            }
            level = next;
            pk = next_pk;
        }
        for &(u, w) in &level {
            let v = embed(unit, u, w);
            let partials = [2 * a * v[0], 2 * b * v[1], 2 * v[2]];
            let delta = partials.iter().map(|d| val(d.rem_euclid(m), p, n)).min().unwrap();
            if 2 * delta < n {
                return true;
            }
        }
    }
    false
}

pub fn embed(unit: usize, u: i64, w: i64) -> [i64; 3] {
    match unit {
        0 => [1, u, w],
        1 => [u, 1, w],
        _ => [u, w, 1],
    }
}

/// Plain modular evaluator written independently of the library.
pub struct Dense {
    pub terms: Vec<(i64, [u32; 3])>,
}

impl Dense {
    pub fn new(g: &ZPoly) -> Self {
        let terms = g
            .terms()
            .map(|(m, c)| (i64::try_from(c.clone()).unwrap(), m.0))
            .collect();
        Dense { terms }
    }

    pub fn eval(&self, x: [u64; 3], p: u64) -> u64 {
        let mut acc = 0u64;
        for &(c, e) in &self.terms {
            let mut t = c.rem_euclid(p as i64) as u64;
            for i in 0..3 {
                for _ in 0..e[i] {
                    t = t * x[i] % p;
                }
            }
            acc = (acc + t) % p;
        }
        acc
    }

    pub fn partial(&self, var: usize) -> Dense {
        let terms = self
            .terms
            .iter()
            .filter(|(_, e)| e[var] > 0)
            .map(|&(c, mut e)| {
                let k = e[var] as i64;
                e[var] -= 1;
                (c * k, e)
            })
            .collect();
        Dense { terms }
    }
}

/// `#{(x, w) : x != 0, w^2 = g(x)} / (p - 1)`: the scaling `(l x, l^3 w)`
/// acts freely once `x != 0`.
pub fn exhaustive_count(g: &Dense, p: u64) -> u64 {
    let mut total = 0u64;
    for x0 in 0..p {
        for x1 in 0..p {
            for x2 in 0..p {
                if x0 == 0 && x1 == 0 && x2 == 0 {
                    continue;
                }
                let v = g.eval([x0, x1, x2], p);
                total += (0..p).filter(|w| w * w % p == v).count() as u64;
            }
        }
    }
    total / (p - 1)
}

pub fn normalized(x: [u64; 3], p: u64) -> Option<[u64; 3]> {
    let lead = *x.iter().find(|&&c| c != 0)?;
    let inv = (1..p).find(|i| i * lead % p == 1).unwrap();
    Some(x.map(|c| c * inv % p))
}

pub fn singular_by_brute_force(g: &Dense, p: u64) -> Vec<[u64; 3]> {
    let partials = [g.partial(0), g.partial(1), g.partial(2)];
    let mut out = Vec::new();
    for x0 in 0..p {
        for x1 in 0..p {
            for x2 in 0..p {
                let x = [x0, x1, x2];
                let Some(n) = normalized(x, p) else { continue };
                if n != x {
                    continue;
                }
                if g.eval(x, p) == 0 && partials.iter().all(|d| d.eval(x, p) == 0) {
                    out.push(x);
                }
            }
        }
    }
    out.sort();
    out
}
