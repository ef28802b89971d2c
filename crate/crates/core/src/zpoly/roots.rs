//! Certified isolation of the complex roots of a squarefree integer polynomial.
//!
//! Approximations come from Aberth iteration (f64 first, then dyadic
//! multiprecision). They are certified a posteriori: with Weierstrass
//! corrections `W_i = f(z_i) / (a_n prod_{j != i} (z_i - z_j))`, the disks
//! `D(z_i, n |W_i|)` cover all roots and each connected component of `k`
//! disks holds exactly `k` roots. Pairwise disjoint disks therefore isolate.
//! Real roots are recognized by symmetry and refined by exact bisection.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntPoly;
use crate::dyadic::{CBall, CDyadic, Dyadic, Round};
use crate::error::{Error, Result};

/// Largest working precision tried by root isolation, in bits.
const ISOLATION_LIMIT: u64 = 1 << 15;

/// Axis-aligned box with exact rational corners.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComplexBox {
    pub re_lo: BigRational,
    pub re_hi: BigRational,
    pub im_lo: BigRational,
    pub im_hi: BigRational,
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

impl ComplexBox {
    pub fn new(
        re_lo: BigRational,
        re_hi: BigRational,
        im_lo: BigRational,
        im_hi: BigRational,
    ) -> Self {
        debug_assert!(re_lo <= re_hi && im_lo <= im_hi);
        ComplexBox {
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        }
    }

    pub fn point(re: BigRational, im: BigRational) -> Self {
        ComplexBox::new(re.clone(), re, im.clone(), im)
    }

    pub fn width(&self) -> BigRational {
        let a = &self.re_hi - &self.re_lo;
        let b = &self.im_hi - &self.im_lo;
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn center(&self) -> (BigRational, BigRational) {
        (
            (&self.re_lo + &self.re_hi) * half(),
            (&self.im_lo + &self.im_hi) * half(),
        )
    }

    pub fn center_f64(&self) -> (f64, f64) {
        let (a, b) = self.center();
        (rat_f64(&a), rat_f64(&b))
    }

    pub fn is_real(&self) -> bool {
        self.im_lo.is_zero() && self.im_hi.is_zero()
    }

    pub fn conj(&self) -> ComplexBox {
        ComplexBox::new(
            self.re_lo.clone(),
            self.re_hi.clone(),
            -self.im_hi.clone(),
            -self.im_lo.clone(),
        )
    }

    /// Closed boxes share a point.
    pub fn intersects(&self, o: &ComplexBox) -> bool {
        self.re_lo <= o.re_hi && o.re_lo <= self.re_hi && self.im_lo <= o.im_hi && o.im_lo <= self.im_hi
    }

    pub fn contains_box(&self, o: &ComplexBox) -> bool {
        self.re_lo <= o.re_lo && o.re_hi <= self.re_hi && self.im_lo <= o.im_lo && o.im_hi <= self.im_hi
    }

    pub fn contains_point(&self, re: &BigRational, im: &BigRational) -> bool {
        &self.re_lo <= re && re <= &self.re_hi && &self.im_lo <= im && im <= &self.im_hi
    }

    /// Exact bounds on `|z|^2` over the box.
    pub fn abs_sq_bounds(&self) -> (BigRational, BigRational) {
        let lo1 = interval_min_abs(&self.re_lo, &self.re_hi);
        let lo2 = interval_min_abs(&self.im_lo, &self.im_hi);
        let hi1 = self.re_lo.abs().max(self.re_hi.abs());
        let hi2 = self.im_lo.abs().max(self.im_hi.abs());
        (&lo1 * &lo1 + &lo2 * &lo2, &hi1 * &hi1 + &hi2 * &hi2)
    }

    /// A ball enclosing the box.
    pub fn to_ball(&self) -> CBall {
        let (cr, ci) = self.center();
        let (mr, er) = dyadic_near(&cr);
        let (mi, ei) = dyadic_near(&ci);
        let hw = (&self.re_hi - &self.re_lo) * half();
        let hh = (&self.im_hi - &self.im_lo) * half();
        let rad = &(&(&dyadic_upper(&hw) + &dyadic_upper(&hh)) + &er) + &ei;
        CBall::new(CDyadic::new(mr, mi), rad)
    }
}

fn interval_min_abs(lo: &BigRational, hi: &BigRational) -> BigRational {
    if lo.is_positive() {
        lo.clone()
    } else if hi.is_negative() {
        -hi.clone()
    } else {
        BigRational::zero()
    }
}

pub(crate) fn rat_f64(q: &BigRational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => {
            let n = Dyadic::from_int(q.numer().clone());
            let d = Dyadic::from_int(q.denom().clone());
            Dyadic::div(&n, &d, 60, Round::Down).to_f64()
        }
    }
}

/// Dyadic approximation of a rational with 128 bits and an upper bound on the error.
fn dyadic_near(q: &BigRational) -> (Dyadic, Dyadic) {
    let n = Dyadic::from_int(q.numer().clone());
    let d = Dyadic::from_int(q.denom().clone());
    let lo = Dyadic::div(&n, &d, 128, Round::Down);
    let hi = Dyadic::div(&n, &d, 128, Round::Up);
    let err = &hi - &lo;
    (lo, err)
}

pub(crate) fn dyadic_upper(q: &BigRational) -> Dyadic {
    dyadic_round(q, 64, Round::Up)
}

/// Directed rounding of a rational to a dyadic with `prec` significant bits.
pub(crate) fn dyadic_round(q: &BigRational, prec: u64, mode: Round) -> Dyadic {
    let n = Dyadic::from_int(q.numer().clone());
    let d = Dyadic::from_int(q.denom().clone());
    Dyadic::div(&n, &d, prec, mode)
}

impl IntPoly {
    /// Pairwise disjoint boxes, one per root, each of width at most `eps`,
    /// sorted by real and then imaginary part of the box centers.
    ///
    /// The input must be squarefree of positive degree.
    pub fn complex_roots(&self, eps: &BigRational) -> Result<Vec<ComplexBox>> {
        isolate_roots(self, eps)
    }
}

/// See [`IntPoly::complex_roots`].
pub(crate) fn isolate_roots(f: &IntPoly, eps: &BigRational) -> Result<Vec<ComplexBox>> {
    let n = match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::invalid("constant polynomial has no roots")),
        Some(n) => n,
    };
    if !eps.is_positive() {
        return Err(Error::invalid("box width must be positive"));
    }
    if n == 1 {
        let r = BigRational::new(-f.coeff(0), f.coeff(1));
        return Ok(vec![ComplexBox::point(r, BigRational::zero())]);
    }
    let coeff_bits = f.coeffs().iter().map(|c| c.bits()).max().unwrap_or(1);
    let mut prec = (96 + 2 * coeff_bits).max(128);
    let mut z = match aberth_f64(f) {
        Some(z) => z,
        None => aberth_dyadic(f, circle_start(f), prec),
    };
    loop {
        if let Some(boxes) = try_isolate(f, &z, prec, eps) {
            let mut boxes = boxes;
            boxes.sort_by(|a, b| cmp_centers(a, b));
            return Ok(boxes);
        }
        prec *= 2;
        if prec > ISOLATION_LIMIT {
            return Err(Error::cap(ISOLATION_LIMIT as u32, "isolating polynomial roots"));
        }
        z = aberth_dyadic(f, z, prec);
    }
}

fn cmp_centers(a: &ComplexBox, b: &ComplexBox) -> Ordering {
    let (ar, ai) = a.center();
    let (br, bi) = b.center();
    ar.cmp(&br).then(ai.cmp(&bi))
}

/// Certify the approximations and produce boxes; `None` means more precision is needed.
fn try_isolate(f: &IntPoly, z: &[CDyadic], prec: u64, eps: &BigRational) -> Option<Vec<ComplexBox>> {
    let radii = certify(f, z, prec)?;
    let n = z.len();
    let disks: Vec<CBall> = z
        .iter()
        .zip(&radii)
        .map(|(c, r)| CBall {
            mid: c.clone(),
            rad: r.clone(),
        })
        .collect();
    let mut boxes: Vec<Option<ComplexBox>> = vec![None; n];
    for i in 0..n {
        if boxes[i].is_some() {
            continue;
        }
        let mirror = CBall {
            mid: disks[i].mid.conj(),
            rad: disks[i].rad.clone(),
        };
        let hits: Vec<usize> = (0..n).filter(|&j| mirror.intersects(&disks[j])).collect();
        if hits == [i] {
            // self-conjugate: the root is real and lies on the disk's diameter
            let lo = &disks[i].mid.re - &disks[i].rad;
            let hi = &disks[i].mid.re + &disks[i].rad;
            let (lo, hi) = bisect_real(f, lo, hi, eps);
            boxes[i] = Some(ComplexBox::new(lo, hi, BigRational::zero(), BigRational::zero()));
        } else if hits.len() == 1 && hits[0] != i {
            let j = hits[0];
            let up = if disks[i].mid.im.is_negative() { j } else { i };
            let b = square_around(&disks[up]);
            if b.width() > *eps {
                return None;
            }
            let lower = if up == i { j } else { i };
            boxes[lower] = Some(b.conj());
            boxes[up] = Some(b);
        } else {
            return None;
        }
    }
    let boxes: Vec<ComplexBox> = boxes.into_iter().map(|b| b.expect("classified")).collect();
    for i in 0..n {
        for j in i + 1..n {
            if boxes[i].intersects(&boxes[j]) {
                return None;
            }
        }
    }
    Some(boxes)
}

fn square_around(d: &CBall) -> ComplexBox {
    let r = d.rad.to_rational();
    let re = d.mid.re.to_rational();
    let im = d.mid.im.to_rational();
    ComplexBox::new(&re - &r, &re + &r, &im - &r, &im + &r)
}

/// Radii `n |W_i|` of the inclusion disks, or `None` if they are not pairwise disjoint.
fn certify(f: &IntPoly, z: &[CDyadic], prec: u64) -> Option<Vec<Dyadic>> {
    let n = z.len();
    let an = Dyadic::from_int(f.lc().abs());
    let nd = Dyadic::from_int(n as u64);
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let v = CBall::eval_int_poly(f.coeffs(), &CBall::exact(z[i].clone()), prec);
        let num = &v.mid.abs_upper() + &v.rad;
        let mut den = an.clone();
        for j in 0..n {
            if j != i {
                let d = z[i].sub(&z[j]).abs_lower();
                if d.is_zero() {
                    return None;
                }
                den = (&den * &d).round_rel(64, Round::Down);
            }
        }
        let w = Dyadic::div(&num, &den, 40, Round::Up);
        radii.push((&w * &nd).round_rel(40, Round::Up));
    }
    for i in 0..n {
        for j in i + 1..n {
            let d2 = z[i].sub(&z[j]).norm_sq();
            let r = &radii[i] + &radii[j];
            if d2 <= &r * &r {
                return None;
            }
        }
    }
    Some(radii)
}

/// Sign of `f` at a dyadic point, computed exactly.
fn sign_at(f: &IntPoly, x: &Dyadic) -> Ordering {
    let n = f.deg();
    let e = x.exponent();
    let v = if e >= 0 {
        f.eval(&(x.mantissa() << e as usize))
    } else {
        f.eval_homogeneous(x.mantissa(), &(BigInt::one() << (-e) as usize), n)
    };
    v.cmp(&BigInt::zero())
}

/// Shrink `[lo, hi]`, known to hold exactly one simple real root, to width `<= eps`.
fn bisect_real(f: &IntPoly, mut lo: Dyadic, mut hi: Dyadic, eps: &BigRational) -> (BigRational, BigRational) {
    let s_lo = sign_at(f, &lo);
    if s_lo == Ordering::Equal {
        let r = lo.to_rational();
        return (r.clone(), r);
    }
    if sign_at(f, &hi) == Ordering::Equal {
        let r = hi.to_rational();
        return (r.clone(), r);
    }
    while (&hi - &lo).to_rational() > *eps {
        let mid = (&lo + &hi).mul_pow2(-1);
        match sign_at(f, &mid) {
            Ordering::Equal => {
                let r = mid.to_rational();
                return (r.clone(), r);
            }
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    (lo.to_rational(), hi.to_rational())
}

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }
    fn add(self, o: C64) -> C64 {
        C64::new(self.re + o.re, self.im + o.im)
    }
    fn sub(self, o: C64) -> C64 {
        C64::new(self.re - o.re, self.im - o.im)
    }
    fn mul(self, o: C64) -> C64 {
        C64::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
    fn div(self, o: C64) -> C64 {
        let d = o.re * o.re + o.im * o.im;
        C64::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
    fn finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Radius of a disk about the origin containing all roots (Fujiwara-type bound).
fn root_bound_log2(f: &IntPoly) -> i64 {
    let n = f.deg();
    let ln = Dyadic::from_int(f.lc().clone()).ln_abs();
    let mut best = f64::NEG_INFINITY;
    for i in 0..n {
        let c = f.coeff(i);
        if c.is_zero() {
            continue;
        }
        let v = (Dyadic::from_int(c).ln_abs() - ln) / (n - i) as f64;
        best = best.max(v);
    }
    if best == f64::NEG_INFINITY {
        return 0;
    }
    (best / std::f64::consts::LN_2).ceil() as i64 + 1
}

fn start_angles(n: usize) -> impl Iterator<Item = (f64, f64)> {
    (0..n).map(move |k| {
        let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
        (t.cos(), t.sin())
    })
}

fn aberth_f64(f: &IntPoly) -> Option<Vec<CDyadic>> {
    let n = f.deg();
    let c: Vec<f64> = f.coeffs().iter().map(|a| a.to_f64().unwrap_or(f64::INFINITY)).collect();
    if c.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let rb = root_bound_log2(f);
    if rb.abs() > 900 {
        return None;
    }
    let r = 2f64.powi(rb as i32);
    let mut z: Vec<C64> = start_angles(n).map(|(a, b)| C64::new(r * a, r * b)).collect();
    let mut done = vec![false; n];
    for _ in 0..800 {
        let mut moved = false;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = horner_f64(&c, z[i]);
            if p.re == 0.0 && p.im == 0.0 {
                done[i] = true;
                continue;
            }
            let ratio = p.div(dp);
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s = s.add(C64::new(1.0, 0.0).div(z[i].sub(z[j])));
                }
            }
            let w = ratio.div(C64::new(1.0, 0.0).sub(ratio.mul(s)));
            if !w.finite() {
                return None;
            }
            z[i] = z[i].sub(w);
            if w.abs() <= 1e-16 * z[i].abs().max(1e-300) {
                done[i] = true;
            } else {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    if z.iter().any(|w| !w.finite()) {
        return None;
    }
    Some(z.into_iter().map(|w| CDyadic::from_f64(w.re, w.im)).collect())
}

fn horner_f64(c: &[f64], x: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp.mul(x).add(p);
        p = p.mul(x).add(C64::new(a, 0.0));
    }
    (p, dp)
}

fn circle_start(f: &IntPoly) -> Vec<CDyadic> {
    let rb = root_bound_log2(f);
    let r = Dyadic::pow2(rb);
    start_angles(f.deg())
        .map(|(a, b)| {
            CDyadic::new(
                &Dyadic::from_f64(a) * &r,
                &Dyadic::from_f64(b) * &r,
            )
        })
        .collect()
}

fn cround(z: &CDyadic, prec: u64) -> CDyadic {
    z.round_rel(prec)
}

fn horner_dyadic(f: &IntPoly, x: &CDyadic, prec: u64) -> (CDyadic, CDyadic) {
    let mut p = CDyadic::zero();
    let mut dp = CDyadic::zero();
    for a in f.coeffs().iter().rev() {
        dp = cround(&dp.mul(x).add(&p), prec);
        p = cround(&p.mul(x).add(&CDyadic::real(Dyadic::from_int(a.clone()))), prec);
    }
    (p, dp)
}

/// Aberth iteration in dyadic arithmetic with `prec` bits.
fn aberth_dyadic(f: &IntPoly, mut z: Vec<CDyadic>, prec: u64) -> Vec<CDyadic> {
    let n = z.len();
    let one = CDyadic::real(Dyadic::one());
    // separate coincident starting points
    for i in 0..n {
        for j in 0..i {
            if z[i] == z[j] {
                let bump = Dyadic::pow2(z[i].re.msb().max(z[i].im.msb()).max(0) - 40 - i as i64);
                z[i] = CDyadic::new(&z[i].re + &bump, &z[i].im + &bump);
            }
        }
    }
    let tiny = prec as i64 - 8;
    let mut done = vec![false; n];
    for _ in 0..(200 + 4 * n) {
        let mut moved = false;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = horner_dyadic(f, &z[i], prec);
            if p.is_zero() {
                done[i] = true;
                continue;
            }
            if dp.is_zero() {
                let bump = Dyadic::pow2(-(prec as i64) / 2);
                z[i] = CDyadic::new(&z[i].re + &bump, z[i].im.clone());
                moved = true;
                continue;
            }
            let ratio = p.div_approx(&dp, prec);
            let mut s = CDyadic::zero();
            for j in 0..n {
                if j != i {
                    let d = z[i].sub(&z[j]);
                    if d.is_zero() {
                        continue;
                    }
                    s = cround(&s.add(&one.div_approx(&d, prec)), prec);
                }
            }
            let den = one.sub(&cround(&ratio.mul(&s), prec));
            let w = if den.is_zero() { ratio } else { ratio.div_approx(&den, prec) };
            z[i] = cround(&z[i].sub(&w), prec);
            let scale = z[i].re.msb().max(z[i].im.msb());
            let wmag = w.re.msb().max(w.im.msb());
            if w.is_zero() || (!z[i].is_zero() && wmag < scale - tiny) {
                done[i] = true;
            } else {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    z
}
