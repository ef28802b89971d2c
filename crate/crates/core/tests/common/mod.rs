//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library except to build inputs.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use orbitint::IntPoly;

pub fn poly(c: &[i64]) -> IntPoly {
    IntPoly::from_i64s(c)
}

pub fn gcd_all(c: &[i64]) -> i64 {
    c.iter().fold(0i64, |g, &x| g.gcd(&x))
}

fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt().round() as i64;
    (r - 1..=r + 1).any(|s| s >= 0 && s * s == n)
}

/// Horner evaluation at `num/den`, scaled by `den^deg`.
fn eval_scaled(c: &[i64], num: i64, den: i64) -> i128 {
    let e = c.len() - 1;
    let mut s: i128 = 0;
    for (i, &a) in c.iter().enumerate() {
        s += a as i128 * (num as i128).pow(i as u32) * (den as i128).pow((e - i) as u32);
    }
    s
}

fn divisors(n: i64) -> Vec<i64> {
    let n = n.abs();
    (1..=n).filter(|d| n % d == 0).collect()
}

fn has_rational_root(c: &[i64]) -> bool {
    if c[0] == 0 {
        return true;
    }
    let lc = *c.last().unwrap();
    for p in divisors(c[0]) {
        for q in divisors(lc) {
            for s in [p, -p] {
                if eval_scaled(c, s, q) == 0 {
                    return true;
                }
            }
        }
    }
    false
}

fn poly_rem_mod(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
    let mut r: Vec<i64> = a.iter().map(|x| x.rem_euclid(p)).collect();
    let db = b.len() - 1;
    let inv = mod_inv(b[db].rem_euclid(p), p);
    while r.len() > db {
        let top = *r.last().unwrap();
        if top != 0 {
            let k = top * inv % p;
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] - k * bi).rem_euclid(p);
            }
        }
        r.pop();
    }
    r
}

fn mod_inv(a: i64, p: i64) -> i64 {
    (1..p).find(|x| a * x % p == 1).expect("invertible")
}

/// Irreducible over Q modulo `p` for degree 4: no root and no monic quadratic factor.
fn quartic_irreducible_mod(c: &[i64], p: i64) -> bool {
    if c[4] % p == 0 {
        return false;
    }
    for x in 0..p {
        if eval_scaled(c, x, 1).rem_euclid(p as i128) == 0 {
            return false;
        }
    }
    for b in 0..p {
        for a in 0..p {
            if poly_rem_mod(c, &[a, b, 1], p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// A sufficient test for irreducibility over Q of a primitive polynomial of
/// degree at most 4 with small coefficients; `false` means "not certified".
pub fn certified_irreducible(c: &[i64]) -> bool {
    let e = c.len() - 1;
    if *c.last().unwrap() == 0 || gcd_all(c) != 1 {
        return false;
    }
    match e {
        1 => true,
        2 => !is_square(c[1] * c[1] - 4 * c[0] * c[2]),
        3 => !has_rational_root(c),
        4 => [2, 3, 5, 7, 11, 13].iter().any(|&p| quartic_irreducible_mod(c, p)),
        _ => false,
    }
}

#[derive(Clone, Copy, Debug)]
struct C64(f64, f64);

impl C64 {
    fn add(self, o: C64) -> C64 {
        C64(self.0 + o.0, self.1 + o.1)
    }
    fn sub(self, o: C64) -> C64 {
        C64(self.0 - o.0, self.1 - o.1)
    }
    fn mul(self, o: C64) -> C64 {
        C64(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn div(self, o: C64) -> C64 {
        let d = o.0 * o.0 + o.1 * o.1;
        C64((self.0 * o.0 + self.1 * o.1) / d, (self.1 * o.0 - self.0 * o.1) / d)
    }
    fn abs(self) -> f64 {
        self.0.hypot(self.1)
    }
}

/// Complex roots by Durand-Kerner iteration in double precision.
pub fn roots_f64(c: &[i64]) -> Vec<(f64, f64)> {
    let e = c.len() - 1;
    let lc = c[e] as f64;
    let monic: Vec<f64> = c.iter().map(|&x| x as f64 / lc).collect();
    let radius = 1.0 + monic[..e].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let seed = C64(0.4, 0.9);
    let mut z: Vec<C64> = Vec::with_capacity(e);
    let mut w = C64(radius, 0.0);
    for _ in 0..e {
        w = w.mul(seed);
        z.push(w);
    }
    let eval = |x: C64| {
        let mut acc = C64(1.0, 0.0);
        for i in (0..e).rev() {
            acc = acc.mul(x).add(C64(monic[i], 0.0));
        }
        acc
    };
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..e {
            let mut den = C64(1.0, 0.0);
            for j in 0..e {
                if i != j {
                    den = den.mul(z[i].sub(z[j]));
                }
            }
            let step = eval(z[i]).div(den);
            z[i] = z[i].sub(step);
            delta = delta.max(step.abs() / z[i].abs().max(1.0));
        }
        if delta < 1e-15 {
            break;
        }
    }
    z.into_iter().map(|x| (x.0, x.1)).collect()
}

/// Mahler measure from floating-point roots.
pub fn mahler_f64(c: &[i64]) -> f64 {
    let lc = (*c.last().unwrap() as f64).abs();
    roots_f64(c)
        .into_iter()
        .map(|(re, im)| re.hypot(im).max(1.0))
        .product::<f64>()
        * lc
}

pub fn naive_height(c: &[i64]) -> i64 {
    c.iter().map(|x| x.abs()).max().unwrap_or(0)
}

/// Every coefficient vector of `Pol+(d, b)`: degree exactly `d`, leading
/// coefficient in `1..=b`, others in `-b..=b`.
pub fn pol_plus(d: usize, b: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * b + 1) as u64;
    let per_lc = side.pow(d as u32);
    (0..b as u64 * per_lc).map(move |mut idx| {
        let mut c = vec![0i64; d + 1];
        for slot in c.iter_mut().take(d) {
            *slot = (idx % side) as i64 - b;
            idx /= side;
        }
        c[d] = idx as i64 + 1;
        c
    })
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// The first `k` primes at which `g` has `deg g` distinct roots and a unit
/// leading coefficient, with the smallest root.
pub fn split_primes_oracle(g: &[i64], k: usize) -> Vec<(u64, u64)> {
    let e = g.len() - 1;
    let mut out = Vec::new();
    let mut p = 1u64;
    while out.len() < k {
        p += 1;
        if !is_prime(p) || g[e].rem_euclid(p as i64) == 0 {
            continue;
        }
        let roots: Vec<u64> = (0..p)
            .filter(|&x| eval_scaled(g, x as i64, 1).rem_euclid(p as i128) == 0)
            .collect();
        if roots.len() == e {
            out.push((p, roots[0]));
        }
    }
    out
}

/// `a_d` is a unit mod `p` and `f(r) = 0` mod `p`.
pub fn single_prime_condition(c: &[i64], p: u64, r: u64) -> bool {
    let d = c.len() - 1;
    c[d].rem_euclid(p as i64) != 0 && eval_scaled(c, r as i64, 1).rem_euclid(p as i128) == 0
}

/// Exact iteration of `z -> (z^2 - 1)/z` on P^1(Q); `None` is infinity.
pub fn step_z2m1_over_z(z: &Option<(BigInt, BigInt)>) -> Option<(BigInt, BigInt)> {
    let (a, b) = z.as_ref()?;
    if a.is_zero() {
        return None;
    }
    let num = a * a - b * b;
    let den = a * b;
    let g = num.gcd(&den);
    let (mut num, mut den) = (num / &g, den / &g);
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    Some((num, den))
}

/// Log of the height of a point of P^1(Q).
pub fn log_height_q(z: &Option<(BigInt, BigInt)>) -> f64 {
    match z {
        None => 0.0,
        Some((a, b)) => {
            let m = if a.abs() > *b { a.abs() } else { b.clone() };
            let bits = m.bits();
            if bits < 1000 {
                (m.to_string().parse::<f64>().unwrap()).ln()
            } else {
                let shift = bits - 60;
                let top: BigInt = &m >> shift;
                top.to_string().parse::<f64>().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
            }
        }
    }
}

/// Reduced fractions `a/b`, `b >= 1`, with `max(|a|, b) <= bound`.
pub fn reduced_fractions(bound: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for b in 1..=bound {
        for a in -bound..=bound {
            if a.gcd(&b) == 1 {
                out.push((a, b));
            }
        }
    }
    out
}
