//! Exact dyadic rationals `m * 2^e` and complex balls built on them.
//!
//! Sums and products of dyadics are exact. Division and square roots take an
//! explicit rounding direction so callers can keep enclosures rigorous.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

#[derive(Clone, Debug)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// `2^e`
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: e,
        }
    }

    /// Exact conversion; panics on non-finite input.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite f64 has no dyadic value");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let exponent = ((bits >> 52) & 0x7ff) as i64;
        let mantissa = if exponent == 0 {
            (bits & 0xfffffffffffff) << 1
        } else {
            (bits & 0xfffffffffffff) | 0x10000000000000
        };
        Dyadic::new(BigInt::from(mantissa) * sign, exponent - 1075)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Bit length of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent of the leading bit: `2^(msb) <= |x| < 2^(msb+1)`.
    pub fn msb(&self) -> i64 {
        self.exp + self.mant.bits() as i64 - 1
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (m, shift) = if bits > 64 {
            (&self.mant >> (bits - 64) as usize, (bits - 64) as i64)
        } else {
            (self.mant.clone(), 0)
        };
        let mf = m.to_f64().unwrap_or(f64::NAN);
        ldexp(mf, self.exp + shift)
    }

    /// Natural logarithm of |x| as f64 (x must be nonzero); safe for huge exponents.
    pub fn ln_abs(&self) -> f64 {
        let bits = self.mant.bits();
        let (m, shift) = if bits > 64 {
            (&self.mant >> (bits - 64) as usize, (bits - 64) as i64)
        } else {
            (self.mant.clone(), 0)
        };
        m.abs().to_f64().unwrap().ln() + (self.exp + shift) as f64 * std::f64::consts::LN_2
    }

    /// Round to a multiple of `2^e`.
    pub fn round_to_exp(&self, e: i64, mode: Round) -> Self {
        if self.exp >= e {
            return self.clone();
        }
        let shift = (e - self.exp) as usize;
        let den = BigInt::one() << shift;
        let q = match mode {
            Round::Down => self.mant.div_floor(&den),
            Round::Up => -((-&self.mant).div_floor(&den)),
        };
        Dyadic::new(q, e)
    }

    /// Round to `prec` significant bits.
    pub fn round_rel(&self, prec: u64, mode: Round) -> Self {
        let bits = self.mant.bits();
        if bits <= prec {
            return self.clone();
        }
        self.round_to_exp(self.exp + (bits - prec) as i64, mode)
    }

    /// `a / b` rounded in the given direction to at least `prec` significant bits.
    pub fn div(a: &Dyadic, b: &Dyadic, prec: u64, mode: Round) -> Self {
        assert!(!b.is_zero(), "dyadic division by zero");
        if a.is_zero() {
            return Dyadic::zero();
        }
        let (mut num, den) = (a.mant.clone(), b.mant.clone());
        let s = (prec as i64 + den.bits() as i64 - num.bits() as i64 + 2).max(0);
        num <<= s as usize;
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let q = match mode {
            Round::Down => num.div_floor(&den),
            Round::Up => -((-num).div_floor(&den)),
        };
        Dyadic::new(q, a.exp - b.exp - s)
    }

    /// Square root of a nonnegative dyadic, rounded to `prec` bits.
    pub fn sqrt(&self, prec: u64, mode: Round) -> Self {
        assert!(!self.is_negative(), "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut m = self.mant.clone();
        let mut e = self.exp;
        let want = 2 * prec as i64 + 2;
        let grow = (want - m.bits() as i64).max(0);
        let grow = grow + ((e - grow).rem_euclid(2));
        m <<= grow as usize;
        e -= grow;
        let mut s = m.sqrt();
        if mode == Round::Up && &s * &s != m {
            s += 1;
        }
        Dyadic::new(s, e / 2)
    }

    /// Floor as an integer.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            self.mant.div_floor(&(BigInt::one() << (-self.exp) as usize))
        }
    }

    pub fn max(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn min(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Compare against an exact rational.
    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        self.to_rational().cmp(q)
    }
}

fn ldexp(x: f64, e: i64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

fn align(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
    match a.exp.cmp(&b.exp) {
        Ordering::Equal => (a.mant.clone(), b.mant.clone(), a.exp),
        Ordering::Greater => (&a.mant << (a.exp - b.exp) as usize, b.mant.clone(), b.exp),
        Ordering::Less => (a.mant.clone(), &b.mant << (b.exp - a.exp) as usize, a.exp),
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.mant == other.mant && self.exp == other.exp
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // same sign: compare magnitudes by leading bit first
        let (ma, mb) = (self.msb(), other.msb());
        if ma != mb {
            let mag = ma.cmp(&mb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        let (x, y, _) = align(self, other);
        x.cmp(&y)
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (x, y, e) = align(self, rhs);
        Dyadic::new(x + y, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        if rhs.is_zero() {
            return self.clone();
        }
        let (x, y, e) = align(self, rhs);
        Dyadic::new(x - y, e)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic {
            mant: &self.mant * &rhs.mant,
            exp: self.exp + rhs.exp,
        }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Complex number with dyadic parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CDyadic {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl CDyadic {
    pub fn new(re: Dyadic, im: Dyadic) -> Self {
        CDyadic { re, im }
    }

    pub fn real(re: Dyadic) -> Self {
        CDyadic {
            re,
            im: Dyadic::zero(),
        }
    }

    pub fn zero() -> Self {
        CDyadic::real(Dyadic::zero())
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        CDyadic::new(Dyadic::from_f64(re), Dyadic::from_f64(im))
    }

    pub fn add(&self, o: &CDyadic) -> CDyadic {
        CDyadic::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &CDyadic) -> CDyadic {
        CDyadic::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &CDyadic) -> CDyadic {
        CDyadic::new(
            &(&self.re * &o.re) - &(&self.im * &o.im),
            &(&self.re * &o.im) + &(&self.im * &o.re),
        )
    }

    pub fn scale_int(&self, k: &BigInt) -> CDyadic {
        let k = Dyadic::from_int(k.clone());
        CDyadic::new(&self.re * &k, &self.im * &k)
    }

    pub fn conj(&self) -> CDyadic {
        CDyadic::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sq(&self) -> Dyadic {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn round_rel(&self, prec: u64) -> CDyadic {
        // rounds each part relative to the larger magnitude
        let top = self.re.msb().max(self.im.msb());
        if self.is_zero() {
            return self.clone();
        }
        let e = top - prec as i64;
        CDyadic::new(
            self.re.round_to_exp(e, Round::Down),
            self.im.round_to_exp(e, Round::Down),
        )
    }

    /// Upper bound for |z|.
    pub fn abs_upper(&self) -> Dyadic {
        self.norm_sq().sqrt(40, Round::Up)
    }

    /// Lower bound for |z|.
    pub fn abs_lower(&self) -> Dyadic {
        self.norm_sq().sqrt(40, Round::Down)
    }

    /// Approximate quotient, with `prec` bits relative precision.
    pub fn div_approx(&self, o: &CDyadic, prec: u64) -> CDyadic {
        let n = o.norm_sq();
        let t = self.mul(&o.conj());
        CDyadic::new(
            Dyadic::div(&t.re, &n, prec, Round::Down),
            Dyadic::div(&t.im, &n, prec, Round::Down),
        )
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// Closed disk `{z : |z - mid| <= rad}` used as a rigorous enclosure.
#[derive(Clone, Debug)]
pub struct CBall {
    pub mid: CDyadic,
    pub rad: Dyadic,
}

const RAD_BITS: u64 = 30;

impl CBall {
    pub fn exact(mid: CDyadic) -> Self {
        CBall {
            mid,
            rad: Dyadic::zero(),
        }
    }

    pub fn new(mid: CDyadic, rad: Dyadic) -> Self {
        CBall {
            mid,
            rad: rad.round_rel(RAD_BITS, Round::Up),
        }
    }

    /// Ball containing the exact rational `q` (real).
    pub fn from_rational(q: &BigRational, prec: u64) -> Self {
        let n = Dyadic::from_int(q.numer().clone());
        let d = Dyadic::from_int(q.denom().clone());
        if d.mantissa().is_one() {
            // power-of-two denominator: exactly representable
            return CBall::exact(CDyadic::real(n.mul_pow2(-d.exponent())));
        }
        let lo = Dyadic::div(&n, &d, prec, Round::Down);
        let hi = Dyadic::div(&n, &d, prec, Round::Up);
        let rad = &hi - &lo;
        CBall::new(CDyadic::real(lo), rad)
    }

    fn round(mid: CDyadic, rad: Dyadic, prec: u64) -> Self {
        let rounded = mid.round_rel(prec);
        let err = mid.sub(&rounded);
        let err_bound = &err.re.abs() + &err.im.abs();
        CBall::new(rounded, &rad + &err_bound)
    }

    fn mid_abs_bound(&self) -> Dyadic {
        (&self.mid.re.abs() + &self.mid.im.abs()).round_rel(RAD_BITS, Round::Up)
    }

    pub fn add(&self, o: &CBall) -> CBall {
        CBall::new(self.mid.add(&o.mid), &self.rad + &o.rad)
    }

    pub fn sub(&self, o: &CBall) -> CBall {
        CBall::new(self.mid.sub(&o.mid), &self.rad + &o.rad)
    }

    pub fn mul(&self, o: &CBall, prec: u64) -> CBall {
        let mid = self.mid.mul(&o.mid);
        let a = self.mid_abs_bound();
        let b = o.mid_abs_bound();
        let rad = &(&(&a * &o.rad) + &(&b * &self.rad)) + &(&self.rad * &o.rad);
        CBall::round(mid, rad, prec)
    }

    pub fn scale_int(&self, k: &BigInt, prec: u64) -> CBall {
        let kd = Dyadic::from_int(k.abs());
        CBall::round(self.mid.scale_int(k), &self.rad * &kd, prec)
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.norm_sq() <= &self.rad * &self.rad
    }

    /// Reciprocal; `None` when the ball touches zero.
    pub fn inv(&self, prec: u64) -> Option<CBall> {
        let m_lo = self.mid.abs_lower();
        if m_lo <= self.rad {
            return None;
        }
        let c = CDyadic::real(Dyadic::one()).div_approx(&self.mid, prec);
        // |1/z - 1/m| <= r / (|m| (|m| - r)) ; plus the rounding error of c
        let denom = &m_lo * &(&m_lo - &self.rad);
        let r1 = Dyadic::div(&self.rad, &denom, RAD_BITS, Round::Up);
        // rounding error of c: |c - 1/m| <= |c*m - 1| / |m|
        let resid = c.mul(&self.mid).sub(&CDyadic::real(Dyadic::one()));
        let resid_abs = &resid.re.abs() + &resid.im.abs();
        let r2 = Dyadic::div(&resid_abs, &m_lo, RAD_BITS, Round::Up);
        Some(CBall::new(c, &r1 + &r2))
    }

    pub fn div(&self, o: &CBall, prec: u64) -> Option<CBall> {
        Some(self.mul(&o.inv(prec)?, prec))
    }

    /// Whether two closed disks intersect.
    pub fn intersects(&self, o: &CBall) -> bool {
        let d = self.mid.sub(&o.mid).norm_sq();
        let r = &self.rad + &o.rad;
        d <= &r * &r
    }

    /// Whether this disk lies inside the closed disk `o`.
    pub fn inside(&self, o: &CBall) -> bool {
        if self.rad > o.rad {
            return false;
        }
        let d = self.mid.sub(&o.mid).norm_sq();
        let r = &o.rad - &self.rad;
        d <= &r * &r
    }

    /// Upper bound on |z| over the ball.
    pub fn abs_upper(&self) -> Dyadic {
        &self.mid.abs_upper() + &self.rad
    }

    /// Lower bound on |z| over the ball (may be zero).
    pub fn abs_lower(&self) -> Dyadic {
        let l = &self.mid.abs_lower() - &self.rad;
        if l.is_negative() {
            Dyadic::zero()
        } else {
            l
        }
    }

    /// Horner evaluation of an integer polynomial given by ascending coefficients.
    pub fn eval_int_poly(coeffs: &[BigInt], z: &CBall, prec: u64) -> CBall {
        let mut acc = CBall::exact(CDyadic::zero());
        for c in coeffs.iter().rev() {
            acc = acc.mul(z, prec);
            acc = acc.add(&CBall::exact(CDyadic::real(Dyadic::from_int(c.clone()))));
        }
        acc
    }

    pub fn approx(&self) -> (f64, f64) {
        self.mid.to_f64()
    }
}
