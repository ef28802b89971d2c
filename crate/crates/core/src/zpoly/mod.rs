//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored in ascending order of degree with no trailing
//! zeros; the zero polynomial is the empty vector. Every constructor and
//! operation returns that normalized form.

mod factor;
mod gcd;
pub mod modp;
mod resultant;
mod roots;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use factor::Factorization;
pub use modp::FpPoly;
pub use resultant::interpolate;
pub use roots::ComplexBox;
pub(crate) use roots::{dyadic_round, isolate_roots, rat_f64};
pub use modp::factor_mod_p;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn x() -> Self {
        IntPoly::from_i64s(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k];
        v.push(c);
        IntPoly::new(v)
    }

    /// `a*x - b`, the linear polynomial vanishing at `b/a`.
    pub fn linear_for(q: &BigRational) -> Self {
        IntPoly::new(vec![-q.numer().clone(), q.denom().clone()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, treating the zero polynomial as degree 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn lc(&self) -> &BigInt {
        self.coeffs.last().expect("leading coefficient of the zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul_x_pow(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs: v }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        // homogeneous Horner keeps everything integral until the last step
        let (n, d) = (x.numer(), x.denom());
        let deg = match self.degree() {
            Some(k) => k,
            None => return BigRational::zero(),
        };
        let num = self.eval_homogeneous(n, d, deg);
        BigRational::new(num, d.pow(deg as u32))
    }

    /// `sum a_i x^i y^(deg-i)` for a target total degree `deg >= degree`.
    pub fn eval_homogeneous(&self, x: &BigInt, y: &BigInt, deg: usize) -> BigInt {
        debug_assert!(self.degree().map_or(true, |k| k <= deg));
        let mut acc = self.coeff(deg);
        let mut ypow = BigInt::one();
        for i in (0..deg).rev() {
            ypow *= y;
            acc = acc * x + self.coeff(i) * &ypow;
        }
        acc
    }

    /// Value of `f(x) mod p`, for `x` in `0..p`.
    pub fn eval_mod(&self, x: u64, p: u64) -> u64 {
        let mut acc = 0u64;
        for c in self.coeffs.iter().rev() {
            acc = ((acc as u128 * x as u128 + crate::primes::big_mod(c, p) as u128) % p as u128)
                as u64;
        }
        acc
    }

    /// `f(g(x))`
    pub fn compose(&self, g: &IntPoly) -> IntPoly {
        let mut acc = IntPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &IntPoly::constant(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `f(x + r)` for an integer shift.
    pub fn shift_int(&self, r: &BigInt) -> IntPoly {
        let lin = IntPoly::new(vec![r.clone(), BigInt::one()]);
        self.compose(&lin)
    }

    /// Primitive integer polynomial proportional to `f(x + r)`, positive leading coefficient.
    pub fn shift(&self, r: &BigRational) -> IntPoly {
        let d = match self.degree() {
            Some(d) => d,
            None => return IntPoly::zero(),
        };
        let (u, v) = (r.numer(), r.denom());
        let lin = IntPoly::new(vec![u.clone(), v.clone()]);
        let mut acc = IntPoly::zero();
        let mut vpow = Vec::with_capacity(d + 1);
        let mut t = BigInt::one();
        for _ in 0..=d {
            vpow.push(t.clone());
            t *= v;
        }
        for i in (0..=d).rev() {
            acc = &(&acc * &lin) + &IntPoly::constant(self.coeff(i) * &vpow[d - i]);
        }
        acc.primitive_part()
    }

    /// `x^d f(1/x)` without sign normalization.
    pub fn reversal_raw(&self) -> IntPoly {
        let mut v = self.coeffs.clone();
        v.reverse();
        IntPoly::new(v)
    }

    /// `x^d f(1/x)`, sign-normalized to a positive leading coefficient.
    pub fn reversal(&self) -> IntPoly {
        self.reversal_raw().sign_normalized()
    }

    /// Multiply by -1 if the leading coefficient is negative.
    pub fn sign_normalized(self) -> IntPoly {
        if self.coeffs.last().is_some_and(|c| c.is_negative()) {
            -self
        } else {
            self
        }
    }

    /// Gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// `(content, primitive part)` with positive content and a primitive part
    /// whose leading coefficient is positive; `content * primitive = ±f`.
    pub fn content_primitive(&self) -> Result<(BigInt, IntPoly)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let c = self.content();
        let p = IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect());
        Ok((c, p.sign_normalized()))
    }

    /// Primitive part with positive leading coefficient; zero maps to zero.
    pub fn primitive_part(&self) -> IntPoly {
        match self.content_primitive() {
            Ok((_, p)) => p,
            Err(_) => IntPoly::zero(),
        }
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && self.content().is_one()
    }

    /// Maximum absolute value of the coefficients.
    pub fn naive_height(&self) -> Result<BigInt> {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .ok_or(Error::ZeroPolynomial)
    }

    /// Sum of absolute values of coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Exact quotient `self / g` over the integers, if `g` divides `self` in Z[x].
    pub fn div_exact(&self, g: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.div_rem_int(g)?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Division with remainder in Z[x]; `None` when a leading-coefficient
    /// division is not exact (i.e. `g` cannot divide over Z).
    fn div_rem_int(&self, g: &IntPoly) -> Option<(IntPoly, IntPoly)> {
        assert!(!g.is_zero(), "polynomial division by zero");
        let dg = g.deg();
        let lg = g.lc();
        let mut r = self.coeffs.clone();
        if r.len() < g.coeffs.len() {
            return Some((IntPoly::zero(), self.clone()));
        }
        let mut q = vec![BigInt::zero(); r.len() - dg];
        for i in (0..q.len()).rev() {
            let top = &r[i + dg];
            if top.is_zero() {
                continue;
            }
            let (t, rem) = top.div_rem(lg);
            if !rem.is_zero() {
                return None;
            }
            for (j, gc) in g.coeffs.iter().enumerate() {
                r[i + j] -= &t * gc;
            }
            q[i] = t;
        }
        Some((IntPoly::new(q), IntPoly::new(r)))
    }

    /// Pseudo-remainder `lc(g)^(deg f - deg g + 1) f mod g`.
    pub fn pseudo_rem(&self, g: &IntPoly) -> IntPoly {
        assert!(!g.is_zero(), "pseudo-remainder by zero");
        let dg = g.deg();
        if self.is_zero() || self.deg() < dg {
            return self.clone();
        }
        let lg = g.lc().clone();
        let total = self.deg() - dg + 1;
        let mut r = self.clone();
        let mut steps = 0;
        while !r.is_zero() && r.deg() >= dg {
            let k = r.deg() - dg;
            let lr = r.lc().clone();
            r = &r.scale(&lg) - &g.mul_x_pow(k).scale(&lr);
            steps += 1;
        }
        if steps < total {
            r = r.scale(&lg.pow((total - steps) as u32));
        }
        r
    }

    pub fn display_var<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, var }
    }
}

struct PolyDisplay<'a> {
    poly: &'a IntPoly,
    var: &'a str,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    write!(f, "{}", self.var)?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_var("x"))
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl<'a> Add<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -(self.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl IntPoly {
    pub fn pow(&self, k: u32) -> IntPoly {
        let mut acc = IntPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}
