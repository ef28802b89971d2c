//! Congruence sieve showing that points integral with respect to a fixed
//! algebraic point have density zero.
//!
//! For each admissible prime `p` with a chosen root `r_p` of the minimal
//! polynomial `g` of `beta` modulo `p`, a polynomial `f` with `p` not dividing
//! its leading coefficient and `f(r_p) = 0 mod p` has roots close to `beta`
//! at a place above `p`. Such roots cannot be integral with respect to
//! `beta` outside `T`, which removes a proportion `(p - 1)/p^2` of all
//! polynomials for each prime.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algnum::{
    candidate_factors, diff, invert, is_s_integral, lc_supported_on, roots_unchecked, AlgebraicNumber, PlaceSet,
    ProjPoint,
};
use crate::enumerate::{count_points, par_filter_map_minpolys, HeightBound};
use crate::error::{Error, Result};
use crate::primes::{big_mod, primes};
use crate::zpoly::IntPoly;

/// Largest prime examined by [`split_primes`].
pub const SPLIT_SEARCH_LIMIT: u64 = 1_000_000;

/// A prime together with the chosen root of `g` modulo it.
pub type PrimeRoot = (u64, u64);

#[derive(Clone, Debug)]
pub struct SieveContext {
    beta: AlgebraicNumber,
    places: PlaceSet,
    primes: Vec<PrimeRoot>,
}

impl SieveContext {
    /// Context for `beta` using the first `k` admissible primes outside `places`.
    pub fn new(beta: AlgebraicNumber, places: PlaceSet, k: usize) -> Result<Self> {
        let primes = split_primes(beta.minpoly(), k, &places)?;
        Ok(SieveContext { beta, places, primes })
    }

    pub fn beta(&self) -> &AlgebraicNumber {
        &self.beta
    }

    /// The enlarged place set used for integrality.
    pub fn places(&self) -> &PlaceSet {
        &self.places
    }

    pub fn primes(&self) -> &[PrimeRoot] {
        &self.primes
    }
}

/// The first `k` primes, in increasing order, outside `t` and coprime to the
/// leading coefficient and discriminant of `g`, modulo which `g` has `deg g`
/// distinct roots; each paired with its smallest root.
pub fn split_primes(g: &IntPoly, k: usize, t: &PlaceSet) -> Result<Vec<PrimeRoot>> {
    if g.deg() == 0 || !g.is_primitive() || !g.is_irreducible() {
        return Err(Error::invalid(format!("{g} is not a primitive irreducible polynomial")));
    }
    let disc = g.discriminant();
    let lc = g.lc().clone();
    let e = g.deg();
    let mut out = Vec::with_capacity(k);
    for p in primes() {
        if out.len() == k {
            break;
        }
        if p > SPLIT_SEARCH_LIMIT {
            return Err(Error::Budget(format!(
                "only {} admissible primes below {SPLIT_SEARCH_LIMIT} for {g}",
                out.len()
            )));
        }
        if t.contains(p) || big_mod(&lc, p) == 0 || big_mod(&disc, p) == 0 {
            continue;
        }
        if (e as u64) > p {
            continue;
        }
        let mut first = None;
        let mut count = 0;
        for x in 0..p {
            if g.eval_mod(x, p) == 0 {
                first.get_or_insert(x);
                count += 1;
            }
        }
        if count == e {
            out.push((p, first.expect("at least one root")));
        }
    }
    Ok(out)
}

fn check_subset(ctx: &SieveContext, m: &[PrimeRoot]) -> Result<()> {
    for (i, entry) in m.iter().enumerate() {
        if !ctx.primes.contains(entry) {
            return Err(Error::invalid(format!("({}, {}) is not a sieve prime of the context", entry.0, entry.1)));
        }
        if m[..i].iter().any(|o| o.0 == entry.0) {
            return Err(Error::invalid(format!("prime {} repeated", entry.0)));
        }
    }
    Ok(())
}

/// Number of `f` in the box `1 <= a_d <= B`, `|a_i| <= B` with
/// `a_d != 0 mod p` and `f(r_p) = 0 mod p` for every `(p, r_p)` in `m`,
/// together with the main term `prod (p-1)/p^2 * 2^d B^(d+1)`.
pub fn count_f_m(ctx: &SieveContext, d: usize, b: u64, m: &[PrimeRoot]) -> Result<(u64, f64)> {
    check_subset(ctx, m)?;
    if d == 0 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    let main = m.iter().map(|&(p, _)| (p - 1) as f64 / (p * p) as f64).product::<f64>()
        * 2f64.powi(d as i32)
        * (b as f64).powi(d as i32 + 1);
    Ok((congruence_count(d, b, m), main))
}

fn congruence_count(d: usize, b: u64, m: &[PrimeRoot]) -> u64 {
    let bi = b as i64;
    let width = 2 * b + 1;
    if m.is_empty() {
        return b * width.pow(d as u32);
    }
    // step the constant term along the largest prime, test the others
    let mut order: Vec<PrimeRoot> = m.to_vec();
    order.sort_by_key(|e| std::cmp::Reverse(e.0));
    // powers r^i mod p for i = 0..=d
    let pows: Vec<Vec<i64>> = order
        .iter()
        .map(|&(p, r)| {
            let mut v = vec![1i64; d + 1];
            for i in 1..=d {
                v[i] = (v[i - 1] as i128 * r as i128 % p as i128) as i64;
            }
            v
        })
        .collect();
    (1..=bi)
        .into_par_iter()
        .map(|lead| {
            if order.iter().any(|&(p, _)| lead % p as i64 == 0) {
                return 0u64;
            }
            let mut mid = vec![-bi; d.saturating_sub(1)];
            let mut total = 0u64;
            loop {
                // residue of a_d r^d + ... + a_1 r for each prime
                let res: Vec<i64> = order
                    .iter()
                    .zip(&pows)
                    .map(|(&(p, _), pw)| {
                        let p = p as i64;
                        let mut s = lead.mod_floor(&p) * pw[d] % p;
                        for (i, &a) in mid.iter().enumerate() {
                            s = (s + a.mod_floor(&p) * pw[i + 1]) % p;
                        }
                        s
                    })
                    .collect();
                let p0 = order[0].0 as i64;
                let target = (-res[0]).mod_floor(&p0);
                let mut a0 = -bi + (target - (-bi)).mod_floor(&p0);
                while a0 <= bi {
                    if order[1..]
                        .iter()
                        .zip(&res[1..])
                        .all(|(&(p, _), &s)| (s + a0).mod_floor(&(p as i64)) == 0)
                    {
                        total += 1;
                    }
                    a0 += p0;
                }
                let mut i = 0;
                while i < mid.len() && mid[i] == bi {
                    mid[i] = -bi;
                    i += 1;
                }
                if i == mid.len() {
                    break;
                }
                mid[i] += 1;
            }
            total
        })
        .sum()
}

/// Inclusion-exclusion over the squarefree products of the first `k` sieve
/// primes: the number of polynomials in the box meeting none of the
/// single-prime conditions.
pub fn count_g_k(ctx: &SieveContext, d: usize, b: u64, k: usize) -> Result<i128> {
    if k > ctx.primes.len() {
        return Err(Error::invalid(format!("only {} sieve primes available", ctx.primes.len())));
    }
    if k > 20 {
        return Err(Error::Budget(format!("{k} primes give 2^{k} inclusion-exclusion terms")));
    }
    let mut total = 0i128;
    for mask in 0u32..(1 << k) {
        let m: Vec<PrimeRoot> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| ctx.primes[i]).collect();
        let (exact, _) = count_f_m(ctx, d, b, &m)?;
        if m.len() % 2 == 0 {
            total += exact as i128;
        } else {
            total -= exact as i128;
        }
    }
    Ok(total)
}

/// `prod_{i <= k} (1 - (p_i - 1)/p_i^2)` exactly.
pub fn euler_product(ctx: &SieveContext, k: usize) -> Result<BigRational> {
    if k > ctx.primes.len() {
        return Err(Error::invalid(format!("only {} sieve primes available", ctx.primes.len())));
    }
    let mut acc = BigRational::one();
    for &(p, _) in &ctx.primes[..k] {
        let p = BigInt::from(p);
        acc *= BigRational::one() - BigRational::new(&p - 1, &p * &p);
    }
    Ok(acc)
}

/// Whether `a` falls in the sieve set of `(p, r_p)`: its minimal polynomial
/// vanishes at `r_p` modulo `p`. Errors when `p` divides the leading coefficient.
pub fn in_i_p(a: &AlgebraicNumber, ctx: &SieveContext, entry: PrimeRoot) -> Result<bool> {
    check_subset(ctx, &[entry])?;
    in_sieve_set(a, entry)
}

fn in_sieve_set(a: &AlgebraicNumber, (p, r): PrimeRoot) -> Result<bool> {
    let f = a.minpoly();
    if big_mod(f.lc(), p) == 0 {
        return Err(Error::LeadingCoefficientDivisible { p });
    }
    Ok(f.eval_mod(r, p) == 0)
}

/// Whether `f` stays irreducible over `Q(beta)`, `g` the minimal polynomial
/// of `beta`; equivalently `[Q(alpha, beta) : Q] = deg f * deg g`.
///
/// For `t` with `alpha_i - t beta_j` pairwise distinct, `alpha - t beta`
/// generates `Q(alpha, beta)` and the composed difference is irreducible
/// exactly when that degree is maximal.
pub fn irreducible_over(f: &IntPoly, g: &IntPoly) -> Result<bool> {
    if g.deg() == 1 {
        return Ok(f.is_irreducible());
    }
    for t in 1..=64i64 {
        // minimal polynomial of t * beta
        let k = g.deg();
        let tb = BigInt::from(t);
        let gt = IntPoly::new(g.coeffs().iter().enumerate().map(|(i, c)| c * tb.pow((k - i) as u32)).collect());
        let cd = IntPoly::composed_difference(f, &gt)?;
        if cd.gcd_q(&cd.derivative()).deg() > 0 {
            continue;
        }
        return Ok(candidate_factors(&cd)?.len() == 1);
    }
    Err(Error::Budget(format!("no separating multiplier for {f} over {g}")))
}

#[derive(Clone, Debug)]
pub struct DensityHit {
    pub point: AlgebraicNumber,
    /// Whether the minimal polynomial stays irreducible over `Q(beta)`; the
    /// sieve sets provably avoid such points.
    pub irreducible_over_beta: bool,
    /// Sieve primes whose set contains the point; empty for a sound sieve.
    pub sieve_memberships: Vec<u64>,
    /// Sieve primes dividing the leading coefficient, where the test does not apply.
    pub excluded_primes: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct DensityRow {
    pub bound: HeightBound,
    pub total: u64,
    pub hits: u64,
    pub ratio: f64,
    pub hit_points: Vec<DensityHit>,
}

/// For each bound, the number of finite points `alpha` of degree at most `d`
/// with `1/(alpha - beta)` integral outside the context's place set, against
/// the number of all points of degree at most `d`.
pub fn density_experiment(ctx: &SieveContext, d: usize, grid: &[HeightBound]) -> Result<Vec<DensityRow>> {
    if grid.windows(2).any(|w| w[0].value() >= w[1].value()) {
        return Err(Error::invalid("bound grid must be increasing"));
    }
    grid.iter().map(|b| density_row(ctx, d, b)).collect()
}

fn density_row(ctx: &SieveContext, d: usize, bound: &HeightBound) -> Result<DensityRow> {
    let total = count_points(d, bound, &[])?.total;
    let g = ctx.beta.minpoly();
    let fast = HitFilter::new(g, &ctx.places);
    let mut hit_points = Vec::new();
    for e in 1..=d {
        let found = par_filter_map_minpolys(e, bound, |c| {
            if !fast.may_have_hits(c) {
                return Ok(None);
            }
            let f = IntPoly::from_i64s(c);
            let hits = integral_roots(ctx, &f, g)?;
            Ok(if hits.is_empty() { None } else { Some(hits) })
        })?;
        hit_points.extend(found.into_iter().flatten());
    }
    let hits = hit_points.len() as u64;
    Ok(DensityRow {
        bound: bound.clone(),
        total,
        hits,
        ratio: hits as f64 / total as f64,
        hit_points,
    })
}

/// Cheap exact rejection of polynomials with no root integral with respect to `beta`.
///
/// When `f` stays irreducible over `Q(beta)` the conjugates of `alpha - beta`
/// are all the differences `alpha_i - beta_j`, so the constant term of its
/// minimal polynomial agrees with `Res(f, g)` away from primes dividing the
/// leading coefficients. A prime outside the place set dividing the
/// resultant but neither leading coefficient therefore rules out every root.
struct HitFilter {
    g: Option<Vec<i64>>,
    disc_g: i128,
    primes: Vec<u64>,
}

impl HitFilter {
    fn new(g: &IntPoly, places: &PlaceSet) -> Self {
        let g64 = g.to_i64s().filter(|v| v.len() <= 3 && v.iter().all(|c| c.abs() < 1 << 20));
        let disc_g = match g64.as_deref() {
            Some([c, b, a]) => (*b as i128) * (*b as i128) - 4 * (*a as i128) * (*c as i128),
            _ => 0,
        };
        HitFilter {
            g: g64,
            disc_g,
            primes: places.primes().to_vec(),
        }
    }

    /// `false` only when no root of `f` can be a hit.
    fn may_have_hits(&self, f: &[i64]) -> bool {
        let g = match &self.g {
            Some(g) => g,
            None => return true,
        };
        let (e, k) = (f.len() - 1, g.len() - 1);
        if e > 2 || f.iter().any(|c| c.abs() >= 1 << 20) {
            return true;
        }
        if e == 2 && k == 2 {
            let disc_f = (f[1] as i128) * (f[1] as i128) - 4 * (f[2] as i128) * (f[0] as i128);
            // roots of f in Q(beta): f splits over Q(beta)
            if is_square_i128(disc_f * self.disc_g) {
                return true;
            }
        }
        let res = resultant_small(f, g);
        if res == 0 {
            return true;
        }
        let mut m = res.unsigned_abs();
        for &p in &self.primes {
            while m % p as u128 == 0 {
                m /= p as u128;
            }
        }
        let lead = (f[e].unsigned_abs() as u128) * (g[k].unsigned_abs() as u128);
        loop {
            let c = m.gcd(&lead);
            if c == 1 {
                break;
            }
            m /= c;
        }
        m == 1
    }
}

fn is_square_i128(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r * r == n
}

/// `Res(f, g)` up to sign for degrees at most 2 with small coefficients.
fn resultant_small(f: &[i64], g: &[i64]) -> i128 {
    let w = |v: &[i64]| -> Vec<i128> { v.iter().map(|&c| c as i128).collect() };
    let (f, g) = (w(f), w(g));
    match (f.len() - 1, g.len() - 1) {
        (1, _) => {
            // a^k g(-b/a)
            let (b, a) = (f[0], f[1]);
            let k = g.len() - 1;
            (0..=k).map(|i| g[i] * (-b).pow(i as u32) * a.pow((k - i) as u32)).sum()
        }
        (_, 1) => resultant_small_swap(&f, &g),
        _ => {
            let (c, b, a) = (f[0], f[1], f[2]);
            let (r, q, p) = (g[0], g[1], g[2]);
            (a * r - c * p).pow(2) - (a * q - b * p) * (b * r - c * q)
        }
    }
}

fn resultant_small_swap(f: &[i128], g: &[i128]) -> i128 {
    let (b, a) = (g[0], g[1]);
    let e = f.len() - 1;
    (0..=e).map(|i| f[i] * (-b).pow(i as u32) * a.pow((e - i) as u32)).sum()
}

/// Roots `alpha` of `f` with `1/(alpha - beta)` integral outside the place set.
fn integral_roots(ctx: &SieveContext, f: &IntPoly, g: &IntPoly) -> Result<Vec<DensityHit>> {
    // alpha - beta is a root of one irreducible factor of the composed
    // difference; its reciprocal is integral iff that factor's constant
    // term is supported on the place set
    let cd = IntPoly::composed_difference(f, g)?;
    let possible = candidate_factors(&cd)?
        .iter()
        .any(|h| !h.coeff(0).is_zero() && lc_supported_on(&h.coeff(0), &ctx.places));
    if !possible {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for a in roots_unchecked(f)? {
        let x = diff(&a, &ctx.beta)?;
        if x.is_zero() {
            continue;
        }
        let y = ProjPoint::Finite(invert(&x)?);
        if !is_s_integral(&y, &ctx.places) {
            continue;
        }
        let mut sieve_memberships = Vec::new();
        let mut excluded_primes = Vec::new();
        for &entry in &ctx.primes {
            match in_sieve_set(&a, entry) {
                Ok(true) => sieve_memberships.push(entry.0),
                Ok(false) => {}
                Err(Error::LeadingCoefficientDivisible { p }) => excluded_primes.push(p),
                Err(e) => return Err(e),
            }
        }
        out.push(DensityHit {
            irreducible_over_beta: irreducible_over(f, g)?,
            point: a,
            sieve_memberships,
            excluded_primes,
        });
    }
    Ok(out)
}
