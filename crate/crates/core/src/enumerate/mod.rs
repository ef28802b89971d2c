//! Exhaustive enumeration of integer polynomials and of algebraic points of
//! bounded degree and Weil height, with exact counting.
//!
//! A point of exact degree `e` and height at most `B` has a primitive
//! irreducible minimal polynomial `f` with `M(f) <= B^e`. Since
//! `|a_i| <= binom(e, i) M(f)`, only a finite box of coefficients is scanned;
//! the height test itself is exact.

mod mahler;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algnum::{lc_supported_on, roots_unchecked, PlaceSet, ProjPoint};
use crate::error::{Error, Result};
use crate::primes::binomial;
use crate::zpoly::IntPoly;

pub use mahler::compare_scaled_mahler;

/// How the coefficient box is cut down before the exact height test.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Prune {
    /// `|a_i| <= binom(e, i) B^e` for each coefficient.
    #[default]
    Coefficientwise,
    /// `|a_i| <= binom(e, floor(e/2)) B^e` for every coefficient.
    Uniform,
}

/// A positive rational height bound `B = num / den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightBound {
    num: BigInt,
    den: BigInt,
}

impl HeightBound {
    pub fn new(b: &BigRational) -> Result<Self> {
        if b < &BigRational::one() {
            return Err(Error::invalid(format!("height bound {b} is below 1")));
        }
        Ok(HeightBound {
            num: b.numer().clone(),
            den: b.denom().clone(),
        })
    }

    pub fn integer(b: u64) -> Result<Self> {
        HeightBound::new(&BigRational::from_integer(b.into()))
    }

    /// Parse `12`, `5/2` or `2.5`.
    pub fn parse(text: &str) -> Result<Self> {
        HeightBound::new(&parse_rational(text)?)
    }

    pub fn value(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }

    pub fn to_f64(&self) -> f64 {
        crate::zpoly::rat_f64(&self.value())
    }

    /// `(den^e, num^e)`: `M(f) <= B^e` iff `den^e M(f) <= num^e`.
    fn powers(&self, e: usize) -> (BigInt, BigInt) {
        (self.den.pow(e as u32), self.num.pow(e as u32))
    }

    /// `floor(k B^e)` as an `i64`.
    fn scaled_floor(&self, k: &BigInt, e: usize) -> Result<i64> {
        let (s, t) = self.powers(e);
        (k * t)
            .div_floor(&s)
            .to_i64()
            .filter(|v| *v < (1i64 << 40))
            .ok_or_else(|| Error::Budget(format!("coefficient range for degree {e} is too large")))
    }
}

impl std::fmt::Display for HeightBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value())
    }
}

pub(crate) fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::invalid(format!("cannot parse {t:?} as a number"));
    if let Some((a, b)) = t.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(BigRational::new(a, b));
    }
    if let Some((i, f)) = t.split_once('.') {
        let digits = format!("{i}{f}");
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        return Ok(BigRational::new(n, BigInt::from(10).pow(f.len() as u32)));
    }
    Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?))
}

/// Coefficient limits `[lim_0, ..., lim_e]` for exact degree `e`.
fn coefficient_limits(e: usize, bound: &HeightBound, prune: Prune) -> Result<Vec<i64>> {
    (0..=e)
        .map(|i| {
            let k = match prune {
                Prune::Coefficientwise => binomial(e as u64, i as u64),
                Prune::Uniform => binomial(e as u64, (e / 2) as u64),
            };
            bound.scaled_floor(&k, e)
        })
        .collect()
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
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

fn divisors(n: i64) -> Vec<i64> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1;
    while k * k <= n {
        if n % k == 0 {
            small.push(k);
            if k * k != n {
                large.push(n / k);
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Irreducibility over Q of a primitive polynomial with small coefficients
/// and positive degree.
pub fn is_irreducible_small(c: &[i64]) -> bool {
    let e = c.len() - 1;
    match e {
        0 => false,
        1 => true,
        2 => {
            let d = (c[1] as i128) * (c[1] as i128) - 4 * (c[2] as i128) * (c[0] as i128);
            !is_square_i128(d)
        }
        3 => {
            if c[0] == 0 {
                return false;
            }
            for q in divisors(c[3]) {
                for p in divisors(c[0]) {
                    if gcd_i64(p, q) != 1 {
                        continue;
                    }
                    for sp in [p, -p] {
                        let (p, q) = (sp as i128, q as i128);
                        let v = c[3] as i128 * p * p * p + c[2] as i128 * p * p * q + c[1] as i128 * p * q * q + c[0] as i128 * q * q * q;
                        if v == 0 {
                            return false;
                        }
                    }
                }
            }
            true
        }
        _ => IntPoly::from_i64s(c).is_irreducible(),
    }
}

fn content_is_one(c: &[i64]) -> bool {
    let mut g = 0i64;
    for &a in c {
        g = gcd_i64(g, a);
        if g == 1 {
            return true;
        }
    }
    g == 1
}

/// Options for [`enum_polys`].
#[derive(Clone, Copy, Debug, Default)]
pub struct PolyFilter {
    pub primitive: bool,
    pub irreducible: bool,
}

/// Every integer polynomial of exact degree `d`, positive leading coefficient
/// and naive height at most `hmax`, optionally filtered; the order is
/// lexicographic in `(a_d, a_{d-1}, ..., a_0)`.
pub fn enum_polys(d: usize, hmax: u64, filter: PolyFilter) -> impl Iterator<Item = IntPoly> {
    let h = hmax as i64;
    let mut cur: Option<Vec<i64>> = if d >= 1 && h >= 1 {
        let mut v = vec![-h; d + 1];
        v[d] = 1;
        Some(v)
    } else {
        None
    };
    std::iter::from_fn(move || loop {
        let c = cur.clone()?;
        // advance the odometer: a_0 fastest, a_d slowest
        let mut next = c.clone();
        let mut i = 0;
        loop {
            if i == d {
                if next[d] < h {
                    next[d] += 1;
                    for v in next.iter_mut().take(d) {
                        *v = -h;
                    }
                    cur = Some(next);
                } else {
                    cur = None;
                }
                break;
            }
            if next[i] < h {
                next[i] += 1;
                for v in next.iter_mut().take(i) {
                    *v = -h;
                }
                cur = Some(next);
                break;
            }
            i += 1;
        }
        let keep_prim = !filter.primitive || content_is_one(&c);
        if !keep_prim {
            continue;
        }
        if filter.irreducible {
            let g = c.iter().fold(0i64, |g, &a| gcd_i64(g, a));
            let prim: Vec<i64> = c.iter().map(|a| a / g).collect();
            if !is_irreducible_small(&prim) {
                continue;
            }
        }
        return Some(IntPoly::from_i64s(&c));
    })
}

/// `B (2B + 1)^d`.
pub fn pol_plus_size(d: usize, b: u64) -> BigInt {
    BigInt::from(b) * BigInt::from(2 * b + 1).pow(d as u32)
}

/// Visit the minimal polynomials (ascending coefficients) of exact degree `e`
/// and leading coefficient `lc` whose roots have height at most `bound`.
fn scan_lc(
    e: usize,
    lc: i64,
    bound: &HeightBound,
    lims: &[i64],
    visit: &mut dyn FnMut(&[i64]) -> Result<()>,
) -> Result<()> {
    let (s, t) = bound.powers(e);
    match e {
        1 => {
            for a0 in -lims[0]..=lims[0] {
                if gcd_i64(lc, a0) != 1 {
                    continue;
                }
                let c = [a0, lc];
                if compare_scaled_mahler(&c, &s, &t)? != Ordering::Greater {
                    visit(&c)?;
                }
            }
        }
        2 => {
            for b in -lims[1]..=lims[1] {
                let g = gcd_i64(lc, b);
                for c0 in -lims[0]..=lims[0] {
                    if c0 == 0 || gcd_i64(g, c0) != 1 {
                        continue;
                    }
                    let c = [c0, b, lc];
                    if !is_irreducible_small(&c) {
                        continue;
                    }
                    if compare_scaled_mahler(&c, &s, &t)? != Ordering::Greater {
                        visit(&c)?;
                    }
                }
            }
        }
        _ => {
            let mut c: Vec<i64> = (0..=e).map(|i| if i == e { lc } else { -lims[i] }).collect();
            loop {
                if c[0] != 0 && content_is_one(&c) && is_irreducible_small(&c) && compare_scaled_mahler(&c, &s, &t)? != Ordering::Greater {
                    visit(&c)?;
                }
                let mut i = 0;
                while i < e && c[i] == lims[i] {
                    c[i] = -lims[i];
                    i += 1;
                }
                if i == e {
                    break;
                }
                c[i] += 1;
            }
        }
    }
    Ok(())
}

/// Visit every primitive irreducible polynomial of exact degree `e` with
/// positive leading coefficient whose roots have Weil height at most `bound`.
pub fn for_each_minpoly(
    e: usize,
    bound: &HeightBound,
    prune: Prune,
    mut visit: impl FnMut(&[i64]) -> Result<()>,
) -> Result<()> {
    if e == 0 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    let lims = coefficient_limits(e, bound, prune)?;
    for lc in 1..=lims[e] {
        scan_lc(e, lc, bound, &lims, &mut visit)?;
    }
    Ok(())
}

/// Apply `f` to every minimal polynomial of exact degree `e` within the
/// bound, in parallel over leading coefficients; results keep the sequential
/// order.
pub(crate) fn par_filter_map_minpolys<T, F>(e: usize, bound: &HeightBound, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[i64]) -> Result<Option<T>> + Sync,
{
    let lims = coefficient_limits(e, bound, Prune::Coefficientwise)?;
    let parts: Result<Vec<Vec<T>>> = (1..=lims[e])
        .into_par_iter()
        .map(|lc| {
            let mut out = Vec::new();
            scan_lc(e, lc, bound, &lims, &mut |c| {
                if let Some(t) = f(c)? {
                    out.push(t);
                }
                Ok(())
            })?;
            Ok(out)
        })
        .collect();
    Ok(parts?.into_iter().flatten().collect())
}

/// Visit every point of degree at most `d` and height at most `bound`,
/// starting with infinity and then by exact degree.
pub fn for_each_point(d: usize, bound: &HeightBound, mut visit: impl FnMut(ProjPoint) -> Result<()>) -> Result<()> {
    if d == 0 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    visit(ProjPoint::Infinity)?;
    for e in 1..=d {
        for_each_minpoly(e, bound, Prune::Coefficientwise, |c| {
            for a in roots_unchecked(&IntPoly::from_i64s(c))? {
                visit(ProjPoint::Finite(a))?;
            }
            Ok(())
        })?;
    }
    Ok(())
}

/// All points of degree at most `d` and height at most `bound`.
pub fn enum_points(d: usize, bound: &HeightBound) -> Result<Vec<ProjPoint>> {
    let mut out = Vec::new();
    for_each_point(d, bound, |p| {
        out.push(p);
        Ok(())
    })?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountRecord {
    pub d: usize,
    pub bound: HeightBound,
    pub total: u64,
    /// S-integral counts, one per requested place set.
    pub s_integral: Vec<(PlaceSet, u64)>,
}

/// Exact counts of points of degree at most `d` and height at most `bound`,
/// in total and S-integral for each place set. Work is split by degree and
/// leading coefficient; the merge is an exact sum.
pub fn count_points(d: usize, bound: &HeightBound, sets: &[PlaceSet]) -> Result<CountRecord> {
    count_points_with(d, bound, sets, Prune::Coefficientwise)
}

pub fn count_points_with(d: usize, bound: &HeightBound, sets: &[PlaceSet], prune: Prune) -> Result<CountRecord> {
    if d == 0 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    let mut strata = Vec::new();
    let mut limits = Vec::new();
    for e in 1..=d {
        let lims = coefficient_limits(e, bound, prune)?;
        for lc in 1..=lims[e] {
            strata.push((e, lc));
        }
        limits.push(lims);
    }
    let partial: Result<Vec<(u64, Vec<u64>)>> = strata
        .par_iter()
        .map(|&(e, lc)| {
            let mut total = 0u64;
            let lc_big = BigInt::from(lc);
            let integral: Vec<bool> = sets.iter().map(|s| lc_supported_on(&lc_big, s)).collect();
            scan_lc(e, lc, bound, &limits[e - 1], &mut |_| {
                total += e as u64;
                Ok(())
            })?;
            let per_set = integral.iter().map(|&ok| if ok { total } else { 0 }).collect();
            Ok((total, per_set))
        })
        .collect();
    let mut total = 1u64; // infinity
    let mut per_set = vec![0u64; sets.len()];
    for (t, v) in partial? {
        total += t;
        for (acc, x) in per_set.iter_mut().zip(v) {
            *acc += x;
        }
    }
    Ok(CountRecord {
        d,
        bound: bound.clone(),
        total,
        s_integral: sets.iter().cloned().zip(per_set).collect(),
    })
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::invalid("a slope needs at least two points"));
    }
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::invalid("log-log fit needs positive values"));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("log-log fit needs distinct bounds"));
    }
    Ok(sxy / sxx)
}

/// Exponent of the total counts in the bound.
pub fn exponent_fit(records: &[CountRecord]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.bound.to_f64(), r.total as f64)).collect();
    loglog_slope(&pts)
}

/// Exponent of the S-integral counts for the `k`-th place set.
pub fn exponent_fit_s_integral(records: &[CountRecord], k: usize) -> Result<f64> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (r.bound.to_f64(), r.s_integral[k].1 as f64))
        .collect();
    loglog_slope(&pts)
}

/// Height of `f`'s roots as printed in enumeration output.
pub fn minpoly_height(c: &[i64]) -> Result<f64> {
    let f = IntPoly::from_i64s(c);
    if f.deg() == 1 {
        return Ok(c[0].abs().max(c[1].abs()) as f64);
    }
    let (lo, hi) = crate::algnum::mahler_measure_bounds(&f)?;
    Ok((0.5 * (lo.ln_abs() + hi.ln_abs()) / f.deg() as f64).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hb(b: u64) -> HeightBound {
        HeightBound::integer(b).unwrap()
    }

    #[test]
    fn polynomial_listing() {
        let v: Vec<IntPoly> = enum_polys(1, 1, PolyFilter::default()).collect();
        assert_eq!(v, vec![IntPoly::from_i64s(&[-1, 1]), IntPoly::from_i64s(&[0, 1]), IntPoly::from_i64s(&[1, 1])]);
        for (d, b) in [(1, 3), (2, 2), (3, 1)] {
            assert_eq!(BigInt::from(enum_polys(d, b, PolyFilter::default()).count()), pol_plus_size(d, b));
        }
        let irr: Vec<IntPoly> = enum_polys(2, 1, PolyFilter { primitive: false, irreducible: true }).collect();
        assert!(irr.contains(&IntPoly::from_i64s(&[1, 0, 1])));
        assert!(!irr.contains(&IntPoly::from_i64s(&[-1, 0, 1])));
    }

    #[test]
    fn small_point_sets() {
        assert_eq!(enum_points(1, &hb(1)).unwrap().len(), 4);
        let pts = enum_points(1, &hb(2)).unwrap();
        assert_eq!(pts.len(), 8);
        let two = enum_points(2, &hb(1)).unwrap();
        let labels: Vec<String> = two.iter().map(|p| p.minpoly_label()).collect();
        assert!(labels.contains(&"x^2 + 1".to_string()));
        assert!(!labels.contains(&"x^2 - 2".to_string()));
    }

    #[test]
    fn counts_match_listing_and_reduced_fractions() {
        for b in 1..=12u64 {
            let rec = count_points(1, &hb(b), &[PlaceSet::archimedean()]).unwrap();
            let mut frac = 0u64;
            for q in 1..=b as i64 {
                for p in -(b as i64)..=b as i64 {
                    if p.gcd(&q) == 1 {
                        frac += 1;
                    }
                }
            }
            assert_eq!(rec.total, frac + 1);
            assert_eq!(rec.s_integral[0].1, 2 * b + 1);
        }
        for b in 1..=3u64 {
            let rec = count_points(2, &hb(b), &[]).unwrap();
            assert_eq!(rec.total as usize, enum_points(2, &hb(b)).unwrap().len());
            let naive = count_points_with(2, &hb(b), &[], Prune::Uniform).unwrap();
            assert_eq!(naive.total, rec.total);
        }
    }

    #[test]
    fn rational_bounds() {
        let half = HeightBound::parse("5/2").unwrap();
        assert_eq!(HeightBound::parse("2.5").unwrap(), half);
        // reduced fractions with max(|p|, q) <= 2 plus infinity
        assert_eq!(count_points(1, &half, &[]).unwrap().total, 8);
        assert!(HeightBound::parse("1/2").is_err());
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0].iter().map(|&x: &f64| (x, 3.0 * x.powi(2))).collect();
        assert!((loglog_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
    }
}
