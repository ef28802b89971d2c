//! Polynomials over a prime field `F_p` with word-sized `p`, and their
//! complete factorization.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::IntPoly;
use crate::error::{Error, Result};
use crate::primes::{big_mod, inv_mod, mul_mod};

/// Seed for the randomized equal-degree splitting step.
const SPLIT_SEED: u64 = 0x5eed_0f_f1e1d;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_int(f: &IntPoly, p: u64) -> Self {
        FpPoly::new(p, f.coeffs().iter().map(|a| big_mod(a, p)).collect())
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    /// Lift to integer coefficients in `0..p`.
    pub fn to_int(&self) -> IntPoly {
        IntPoly::new(self.c.iter().map(|&a| BigInt::from(a)).collect())
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0;
        for &a in self.c.iter().rev() {
            acc = (mul_mod(acc, x, self.p) + a) % self.p;
        }
        acc
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lc(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, k: u64) -> FpPoly {
        FpPoly::new(self.p, self.c.iter().map(|&a| mul_mod(a, k, self.p)).collect())
    }

    pub fn add(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| (self.get(i) + o.get(i)) % self.p)
            .collect();
        FpPoly::new(self.p, v)
    }

    pub fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| (self.get(i) + self.p - o.get(i)) % self.p)
            .collect();
        FpPoly::new(self.p, v)
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p as u128;
        let mut out = vec![0u128; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % p;
            }
        }
        FpPoly::new(self.p, out.into_iter().map(|x| x as u64).collect())
    }

    fn get(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn div_rem(&self, g: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!g.is_zero(), "division by the zero polynomial");
        let p = self.p;
        if self.c.len() < g.c.len() {
            return (FpPoly::zero(p), self.clone());
        }
        let dg = g.deg();
        let inv = inv_mod(g.lc(), p);
        let mut r = self.c.clone();
        let mut q = vec![0u64; r.len() - dg];
        for i in (0..q.len()).rev() {
            let t = mul_mod(r[i + dg], inv, p);
            if t == 0 {
                continue;
            }
            q[i] = t;
            for (j, &b) in g.c.iter().enumerate() {
                r[i + j] = (r[i + j] + p - mul_mod(t, b, p)) % p;
            }
        }
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, g: &FpPoly) -> FpPoly {
        self.div_rem(g).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> FpPoly {
        let v = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mul_mod(a, i as u64 % self.p, self.p))
            .collect();
        FpPoly::new(self.p, v)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &FpPoly) -> FpPoly {
        let mut acc = FpPoly::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    /// Roots in `0..p`, ascending, without multiplicity.
    pub fn roots(&self) -> Vec<u64> {
        if self.deg() == 0 {
            return Vec::new();
        }
        let p = self.p;
        // gcd with x^p - x isolates the product of distinct linear factors
        let xp = FpPoly::x(p).pow_mod(&BigUint::from(p), self);
        let lin = self.gcd(&xp.sub(&FpPoly::x(p)));
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
        for f in equal_degree_split(&lin, 1, &mut rng) {
            out.push((p - f.c[0]) % p);
        }
        out.sort_unstable();
        out
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted by degree then coefficients; the leading coefficient is dropped.
    pub fn factor(&self) -> Vec<(FpPoly, u32)> {
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
        let mut out = Vec::new();
        for (s, mult) in squarefree_mod(&self.monic()) {
            for (g, d) in distinct_degree(&s) {
                for h in equal_degree_split(&g, d, &mut rng) {
                    out.push((h, mult));
                }
            }
        }
        out.sort_by(|a, b| {
            (a.0.deg(), &a.0.c, a.1).cmp(&(b.0.deg(), &b.0.c, b.1))
        });
        out
    }

    /// Whether the polynomial is squarefree with all roots in `F_p`.
    pub fn splits_distinct(&self) -> bool {
        self.deg() >= 1 && self.roots().len() == self.deg()
    }
}

/// Checked entry point: factorization of an integer polynomial modulo `p`.
pub fn factor_mod_p(f: &IntPoly, p: u64) -> Result<Vec<(FpPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !crate::primes::is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if big_mod(f.lc(), p) == 0 {
        return Err(Error::LeadingCoefficientDivisible { p });
    }
    Ok(FpPoly::from_int(f, p).factor())
}

/// Squarefree decomposition of a monic polynomial over `F_p`.
fn squarefree_mod(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let df = f.derivative();
    if df.is_zero() {
        // f = g(x^p) = g(x)^p over F_p
        let root = pth_root(f);
        for (g, m) in squarefree_mod(&root) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_rem(&c).0;
    let mut i = 1u32;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).0;
        if z.deg() > 0 {
            out.push((z.monic(), i));
        }
        i += 1;
        w = y;
        c = c.div_rem(&w).0;
    }
    if c.deg() > 0 {
        let root = pth_root(&c);
        for (g, m) in squarefree_mod(&root.monic()) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// For `f` a polynomial in `x^p`, the `g` with `g^p = f` (Frobenius is the identity on `F_p`).
fn pth_root(f: &FpPoly) -> FpPoly {
    let p = f.p as usize;
    let v = f.c.iter().step_by(p).copied().collect();
    FpPoly::new(f.p, v)
}

/// Split a squarefree monic polynomial into products of irreducibles of equal degree.
fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = FpPoly::x(p);
    let mut h = x.clone();
    let mut d = 0;
    let pe = BigUint::from(p);
    while rest.deg() > 0 {
        d += 1;
        if 2 * d > rest.deg() {
            let dd = rest.deg();
            out.push((rest.monic(), dd));
            break;
        }
        h = h.pow_mod(&pe, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.deg() > 0 {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of distinct monic irreducibles of degree `d`.
fn equal_degree_split(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let n = f.deg();
    if f.is_zero() || n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![f.monic()];
    }
    let p = f.p;
    // small fields: linear factors are cheapest to find by evaluation
    if d == 1 && p <= 64 {
        return (0..p)
            .filter(|&r| f.eval(r) == 0)
            .map(|r| FpPoly::new(p, vec![(p - r) % p, 1]))
            .collect();
    }
    loop {
        let a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        let a = FpPoly::new(p, a);
        if a.deg() == 0 {
            continue;
        }
        let b = if p == 2 {
            // absolute trace a + a^2 + ... + a^(2^(d-1))
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            a.pow_mod(&e, f).sub(&FpPoly::one(p))
        };
        let g = f.gcd(&b);
        if g.deg() > 0 && g.deg() < n {
            let h = f.div_rem(&g).0;
            let mut out = equal_degree_split(&g, d, rng);
            out.extend(equal_degree_split(&h.monic(), d, rng));
            return out;
        }
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) mod {}", self.to_int(), self.p)
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
