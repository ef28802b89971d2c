use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::IntPoly;
use crate::error::{Error, Result};

/// Divide out the positive content, keeping the sign of the coefficients.
fn strip_content(f: &IntPoly) -> (BigInt, IntPoly) {
    let c = f.content();
    (c.clone(), IntPoly::new(f.coeffs().iter().map(|a| a / &c).collect()))
}

impl IntPoly {
    /// Resultant `Res_x(self, other)` by the subresultant algorithm.
    ///
    /// Zero when either argument is zero. For a constant `c`,
    /// `Res(f, c) = c^deg f`.
    pub fn resultant(&self, other: &IntPoly) -> BigInt {
        if self.is_zero() || other.is_zero() {
            return BigInt::zero();
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut sign = BigInt::one();
        if a.deg() < b.deg() {
            if (a.deg() * b.deg()) % 2 == 1 {
                sign = -sign;
            }
            std::mem::swap(&mut a, &mut b);
        }
        if b.deg() == 0 {
            return sign * b.lc().pow(a.deg() as u32);
        }
        let (ca, pa) = strip_content(&a);
        let (cb, pb) = strip_content(&b);
        let t = ca.pow(b.deg() as u32) * cb.pow(a.deg() as u32);
        a = pa;
        b = pb;
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = a.deg() - b.deg();
            if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
                sign = -sign;
            }
            let r = a.pseudo_rem(&b);
            a = b;
            let div = &g * h.pow(delta as u32);
            b = IntPoly::new(r.coeffs().iter().map(|c| c / &div).collect());
            if b.is_zero() {
                return BigInt::zero();
            }
            g = a.lc().clone();
            // h <- g^delta / h^(delta - 1), exact
            h = if delta == 0 {
                h
            } else {
                g.pow(delta as u32) / h.pow(delta as u32 - 1)
            };
            if b.deg() == 0 {
                break;
            }
        }
        let da = a.deg() as u32;
        let hh = b.lc().pow(da) / h.pow(da - 1);
        sign * t * hh
    }

    /// Discriminant `(-1)^(n(n-1)/2) Res(f, f') / a_n` for degree `n >= 1`.
    pub fn discriminant(&self) -> BigInt {
        let n = self.deg();
        if n == 0 {
            return BigInt::zero();
        }
        if n == 1 {
            return BigInt::one();
        }
        let r = self.resultant(&self.derivative()) / self.lc();
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// `Res_y(g(y), f(x + y))`: an integer polynomial of degree `deg f * deg g`
    /// whose roots are all differences `alpha - beta` of roots of `f` and `g`.
    pub fn composed_difference(f: &IntPoly, g: &IntPoly) -> Result<IntPoly> {
        if f.deg() == 0 || g.deg() == 0 {
            return Err(Error::invalid("composed difference needs nonconstant inputs"));
        }
        let n = f.deg() * g.deg();
        let start = -((n / 2) as i64);
        let vals: Vec<BigInt> = (0..=n)
            .map(|k| {
                let x0 = BigInt::from(start + k as i64);
                g.resultant(&f.shift_int(&x0))
            })
            .collect();
        interpolate(start, &vals)
    }

    /// `Res_x(self(x), y*q(x) - p(x))` with `y*q - p` taken at formal degree
    /// `max(deg p, deg q)`; its roots are the values `p(alpha)/q(alpha)` at the
    /// roots `alpha` of `self` that are not poles.
    pub fn image_resultant(&self, p: &IntPoly, q: &IntPoly) -> Result<IntPoly> {
        if self.deg() == 0 {
            return Err(Error::invalid("image resultant needs a nonconstant polynomial"));
        }
        let n = self.deg();
        let formal = p.deg().max(q.deg());
        let a = self.lc().clone();
        let start = -((n / 2) as i64);
        let mut vals = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let y0 = BigInt::from(start + k as i64);
            let h = &q.scale(&y0) - p;
            let actual = h.deg();
            let mut r = if h.is_zero() {
                BigInt::zero()
            } else {
                self.resultant(&h)
            };
            if !h.is_zero() && actual < formal {
                r *= a.pow((formal - actual) as u32);
            }
            vals.push(r);
        }
        interpolate(start, &vals)
    }
}

/// The unique integer polynomial of degree `< values.len()` taking
/// `values[k]` at `start + k`; errors if that polynomial is not integral.
pub fn interpolate(start: i64, values: &[BigInt]) -> Result<IntPoly> {
    let n = values.len();
    if n == 0 {
        return Ok(IntPoly::zero());
    }
    // forward differences, then falling-factorial coefficients
    let mut diffs = values.to_vec();
    let mut coef = Vec::with_capacity(n);
    let mut fact = BigInt::one();
    for k in 0..n {
        if k > 0 {
            fact *= BigInt::from(k);
            for i in 0..n - k {
                diffs[i] = &diffs[i + 1] - &diffs[i];
            }
        }
        let (q, r) = diffs[0].div_rem(&fact);
        if !r.is_zero() {
            return Err(Error::invalid("interpolated polynomial is not integral"));
        }
        coef.push(q);
    }
    let mut acc = IntPoly::zero();
    for k in (0..n).rev() {
        let lin = IntPoly::new(vec![BigInt::from(-(k as i64)), BigInt::one()]);
        acc = &(&acc * &lin) + &IntPoly::constant(coef[k].clone());
    }
    Ok(acc.shift_int(&BigInt::from(-start)))
}
