//! Canonical heights by local decomposition.
//!
//! For a lift `W` of a point and the homogeneous map `Phi = (F, G)`,
//! `h^(P) = sum_v G_v(W)` with `G_v(W) = lim r^-n log |Phi^n(W)|_v`. At the
//! archimedean place the limit is a telescoping series of bounded increments
//! evaluated in floating point along a normalized orbit. At primes of good
//! reduction `G_v(W) = log |W|_v`. At the finitely many bad primes the
//! increments are the valuations of `gcd(F(W), G(W))`, tracked modulo a power
//! of the prime. Every series is truncated once its tail bound falls below
//! the tolerance.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{orbit_with, require_dynamical, OrbitOptions, OrbitStatus, RationalMap};
use crate::algnum::{PlaceSet, ProjPoint};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::primes::{prime_divisors, remove_factor};
use crate::zpoly::{rat_f64, IntPoly};

/// Trial-division limit when factoring the resultant.
const FACTOR_LIMIT: u64 = 1 << 22;
const MAX_TERMS: u32 = 400;

/// Explicit constants controlling the height of one step of the map.
#[derive(Clone, Debug)]
pub struct HeightBounds {
    pub degree: usize,
    /// Archimedean increment `log|Phi(W)| - r log|W|` lies in `[arch_lower, arch_upper]`.
    pub arch_lower: f64,
    pub arch_upper: f64,
    /// Bad primes with the valuation of the resultant; `None` if the
    /// resultant could not be factored.
    pub bad_primes: Option<Vec<(u64, u32)>>,
    pub log_resultant: f64,
}

impl HeightBounds {
    pub fn of(f: &RationalMap) -> Result<Self> {
        require_dynamical(f)?;
        let r = f.degree();
        let res = f.homogeneous_resultant();
        let l1 = |g: &IntPoly| Dyadic::from_int(g.l1_norm()).ln_abs();
        let arch_upper = l1(f.num()).max(l1(f.den()));
        let hmax = f
            .num()
            .coeffs()
            .iter()
            .chain(f.den().coeffs())
            .map(|c| c.abs())
            .max()
            .expect("nonzero map");
        let log_h = Dyadic::from_int(hmax).ln_abs();
        let log_res = Dyadic::from_int(res.clone()).ln_abs();
        let rf = r as f64;
        let arch_lower = log_res - (2.0 * rf).ln() - (2.0 * rf - 1.0) * (0.5 * (rf + 1.0).ln() + log_h);
        let bad_primes = prime_divisors(&res, FACTOR_LIMIT)
            .map(|ps| ps.into_iter().map(|p| (p, remove_factor(&res, p).0)).collect());
        Ok(HeightBounds {
            degree: r,
            arch_lower,
            arch_upper,
            bad_primes,
            log_resultant: log_res,
        })
    }

    /// `C` with `|h(phi(P)) - r h(P)| <= C` for every point.
    pub fn global_constant(&self) -> f64 {
        let lower = self.arch_lower - self.log_resultant;
        self.arch_upper.max(-lower).max(0.0)
    }

    fn arch_constant(&self) -> f64 {
        self.arch_upper.abs().max(self.arch_lower.abs())
    }

    /// Number of series terms so that the combined tail is below `tol`.
    fn terms_for(&self, tol: f64, nonarch: f64) -> u32 {
        let r = self.degree as f64;
        let c = self.arch_constant() + nonarch;
        if c <= 0.0 {
            return 1;
        }
        let n = ((c / ((r - 1.0) * tol)).ln() / r.ln()).ceil();
        (n.max(1.0) as u32 + 1).min(MAX_TERMS)
    }

    fn tail(&self, n: u32, c: f64) -> f64 {
        let r = self.degree as f64;
        c * r.powi(-(n as i32)) / (r - 1.0)
    }
}

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn add(self, o: C64) -> C64 {
        C64 { re: self.re + o.re, im: self.im + o.im }
    }
    fn mul(self, o: C64) -> C64 {
        C64 {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
    fn scale(self, k: f64) -> C64 {
        C64 { re: self.re * k, im: self.im * k }
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

fn hom_eval(coeffs: &[f64], r: usize, x: C64, y: C64) -> C64 {
    let mut ypow = vec![C64 { re: 1.0, im: 0.0 }; r + 1];
    for k in 1..=r {
        ypow[k] = ypow[k - 1].mul(y);
    }
    let mut acc = C64 { re: 0.0, im: 0.0 };
    for i in (0..=r).rev() {
        let c = coeffs.get(i).copied().unwrap_or(0.0);
        acc = acc.mul(x).add(ypow[r - i].scale(c));
    }
    acc
}

/// `sum_{n < terms} r^-(n+1) (log|Phi(W_n)| - r log|W_n|)` along the normalized orbit.
fn arch_series(f: &RationalMap, x: C64, y: C64, terms: u32) -> f64 {
    let r = f.degree();
    let to_f = |g: &IntPoly| -> Vec<f64> { g.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::MAX)).collect() };
    let (pc, qc) = (to_f(f.num()), to_f(f.den()));
    let rf = r as f64;
    let norm = |a: C64, b: C64| a.abs().max(b.abs());
    let s = norm(x, y);
    let (mut x, mut y) = (x.scale(1.0 / s), y.scale(1.0 / s));
    let mut sum = 0.0;
    let mut w = 1.0 / rf;
    for _ in 0..terms {
        let nx = hom_eval(&pc, r, x, y);
        let ny = hom_eval(&qc, r, x, y);
        let m = norm(nx, ny);
        sum += w * m.ln();
        x = nx.scale(1.0 / m);
        y = ny.scale(1.0 / m);
        w /= rf;
    }
    sum
}

/// `-sum_{n < terms} r^-(n+1) e_n log l`, with `e_n` the valuation of the
/// gcd of `Phi(W_n)` for the l-primitive lift `W_0 = (u, v)`.
fn bad_prime_series(f: &RationalMap, l: u64, m: u32, u: &BigInt, v: &BigInt, terms: u32) -> f64 {
    let r = f.degree();
    let rf = r as f64;
    let lb = BigInt::from(l);
    let mut k = m as usize * (terms as usize + 1) + 2;
    let mut modulus = lb.pow(k as u32);
    let mut x = u.mod_floor(&modulus);
    let mut y = v.mod_floor(&modulus);
    let mut sum = 0.0;
    let mut w = 1.0 / rf;
    for _ in 0..terms {
        let nx = f.num().eval_homogeneous(&x, &y, r).mod_floor(&modulus);
        let ny = f.den().eval_homogeneous(&x, &y, r).mod_floor(&modulus);
        let val = |z: &BigInt| if z.is_zero() { k } else { remove_factor(z, l).0 as usize };
        let e = val(&nx).min(val(&ny));
        debug_assert!(e <= m as usize);
        sum -= w * e as f64 * (l as f64).ln();
        let scale = lb.pow(e as u32);
        k -= e;
        modulus = lb.pow(k as u32);
        x = (nx / &scale).mod_floor(&modulus);
        y = (ny / &scale).mod_floor(&modulus);
        w /= rf;
    }
    sum
}

/// Canonical height of `P` under `f` within `tol`.
pub fn canonical_height(f: &RationalMap, pt: &ProjPoint, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let hb = HeightBounds::of(f)?;
    // exact repetition proves preperiodicity and height zero
    let quick = OrbitOptions {
        max_iter: 8,
        stop_on_escape: false,
        size_limit_bits: 1 << 12,
    };
    if let Ok(rep) = orbit_with(f, pt, &PlaceSet::archimedean(), &quick) {
        if matches!(rep.status, OrbitStatus::Preperiodic { .. }) {
            return Ok(0.0);
        }
    }
    let a = match pt {
        ProjPoint::Infinity => return rational_height(f, &hb, &BigInt::one(), &BigInt::zero(), tol),
        ProjPoint::Finite(a) => a,
    };
    if let Some(q) = a.to_rational() {
        return rational_height(f, &hb, q.numer(), q.denom(), tol);
    }
    match &hb.bad_primes {
        Some(b) if b.is_empty() => {}
        _ => return iterated_height(f, &hb, pt, tol),
    }
    let terms = hb.terms_for(tol, 0.0);
    let d = a.degree() as f64;
    let one = C64 { re: 1.0, im: 0.0 };
    let mut arch = 0.0;
    for c in a.conjugates()? {
        let (re, im) = c.refine(&crate::algnum::pow2_inv(60))?.approx();
        let z = C64 { re, im };
        arch += z.abs().max(1.0).ln() + arch_series(f, z, one, terms);
    }
    let lc = Dyadic::from_int(a.leading_coeff().clone()).ln_abs();
    Ok((arch + lc) / d)
}

fn rational_height(f: &RationalMap, hb: &HeightBounds, u: &BigInt, v: &BigInt, tol: f64) -> Result<f64> {
    let bad = match &hb.bad_primes {
        Some(b) => b.clone(),
        None => return iterated_height(f, hb, &ProjPoint::rational(&num_rational::BigRational::new(u.clone(), v.clone())), tol),
    };
    let nonarch: f64 = bad.iter().map(|&(l, m)| m as f64 * (l as f64).ln()).sum();
    let terms = hb.terms_for(tol, nonarch);
    let size = u.abs().max(v.abs());
    let log_w = Dyadic::from_int(size.clone()).ln_abs();
    let ratio = |a: &BigInt| rat_f64(&num_rational::BigRational::new(a.clone(), size.clone()));
    let x = C64 { re: ratio(u), im: 0.0 };
    let y = C64 { re: ratio(v), im: 0.0 };
    let mut h = log_w + arch_series(f, x, y, terms);
    for &(l, m) in &bad {
        h += bad_prime_series(f, l, m, u, v, terms);
    }
    Ok(h)
}

/// Fallback: `h(phi^n P) / r^n` from exact iterates, with the global tail bound.
fn iterated_height(f: &RationalMap, hb: &HeightBounds, pt: &ProjPoint, tol: f64) -> Result<f64> {
    let r = hb.degree as f64;
    let c = hb.global_constant();
    let mut cur = pt.clone();
    let mut scale = 1.0;
    for n in 0..64u32 {
        let err = hb.tail(n, c);
        if err <= tol {
            return Ok(cur.log_height()? / scale);
        }
        cur = f.eval_point(&cur)?;
        scale *= r;
        if point_bits(&cur) > 1 << 16 {
            break;
        }
    }
    Err(Error::Budget(format!(
        "canonical height of {pt} under {f} needs more iterates than the size budget allows for tolerance {tol}"
    )))
}

pub(crate) fn point_bits(p: &ProjPoint) -> u64 {
    match p {
        ProjPoint::Infinity => 1,
        ProjPoint::Finite(a) => a.minpoly().coeffs().iter().map(|c| c.bits()).sum(),
    }
}
