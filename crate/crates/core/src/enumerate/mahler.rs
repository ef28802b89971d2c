//! Fast Mahler-measure comparisons for polynomials with machine-size
//! coefficients. Degrees 1 and 2 are decided in closed form; higher degrees
//! use floating-point roots with Weierstrass inclusion radii and fall back to
//! the exact procedure when the enclosure is inconclusive.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::algnum::compare_mahler;
use crate::error::Result;
use crate::zpoly::IntPoly;

/// Compare `s * M(f)` with `t`, where `f` has ascending coefficients `c`
/// (positive leading coefficient, squarefree).
pub fn compare_scaled_mahler(c: &[i64], s: &BigInt, t: &BigInt) -> Result<Ordering> {
    let e = c.len() - 1;
    if let (Some(s64), Some(t64)) = (s.to_i128(), t.to_i128()) {
        match e {
            1 => {
                let m = (c[0] as i128).abs().max((c[1] as i128).abs());
                if let Some(v) = m.checked_mul(s64) {
                    return Ok(v.cmp(&t64));
                }
            }
            2 => {
                if let Some(o) = quadratic_cmp(c[2] as i128, c[1] as i128, c[0] as i128, s64, t64) {
                    return Ok(o);
                }
            }
            _ => {
                if let Some((lo, hi)) = mahler_bounds_f64(c) {
                    let (sf, tf) = (s64 as f64, t64 as f64);
                    if sf * hi < tf * (1.0 - 1e-12) {
                        return Ok(Ordering::Less);
                    }
                    if sf * lo > tf * (1.0 + 1e-12) {
                        return Ok(Ordering::Greater);
                    }
                }
            }
        }
    }
    let f = IntPoly::new(c.iter().map(|&a| BigInt::from(a) * s).collect());
    compare_mahler(&f, t)
}

/// `M(ax^2 + bx + c) = max(a, |c|, (|b| + sqrt D) / 2)` for real roots and
/// `max(a, c)` for complex ones; compared exactly after scaling by `s`.
fn quadratic_cmp(a: i128, b: i128, c: i128, s: i128, t: i128) -> Option<Ordering> {
    let outer = a.max(c.abs()).checked_mul(s)?.cmp(&t);
    let disc = b.checked_mul(b)?.checked_sub(a.checked_mul(c)?.checked_mul(4)?)?;
    if disc < 0 || outer == Ordering::Greater {
        return Some(outer);
    }
    let l = t.checked_mul(2)?.checked_sub(b.abs().checked_mul(s)?)?;
    let mixed = if l < 0 {
        Ordering::Greater
    } else {
        disc.checked_mul(s.checked_mul(s)?)?.cmp(&l.checked_mul(l)?)
    };
    Some(outer.max(mixed))
}

#[derive(Clone, Copy)]
struct Z {
    re: f64,
    im: f64,
}

impl Z {
    fn new(re: f64, im: f64) -> Z {
        Z { re, im }
    }
    fn add(self, o: Z) -> Z {
        Z::new(self.re + o.re, self.im + o.im)
    }
    fn sub(self, o: Z) -> Z {
        Z::new(self.re - o.re, self.im - o.im)
    }
    fn mul(self, o: Z) -> Z {
        Z::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
    fn div(self, o: Z) -> Z {
        let d = o.re * o.re + o.im * o.im;
        Z::new((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Rigorous-up-to-rounding bounds on `M(f)`; `None` when the root
/// approximations cannot be certified.
pub(crate) fn mahler_bounds_f64(c: &[i64]) -> Option<(f64, f64)> {
    let n = c.len() - 1;
    let cf: Vec<f64> = c.iter().map(|&a| a as f64).collect();
    let an = cf[n].abs();
    // Fujiwara-style root bound for the starting circle
    let mut rb: f64 = 0.0;
    for k in 0..n {
        rb = rb.max((cf[k].abs() / an).powf(1.0 / (n - k) as f64));
    }
    let rad = 2.0 * rb.max(1e-3);
    let mut z: Vec<Z> = (0..n)
        .map(|k| {
            let th = std::f64::consts::TAU * (k as f64 + 0.25) / n as f64 + 0.4;
            Z::new(rad * th.cos(), rad * th.sin())
        })
        .collect();
    let eval = |x: Z| {
        let mut p = Z::new(0.0, 0.0);
        let mut dp = Z::new(0.0, 0.0);
        for &a in cf.iter().rev() {
            dp = dp.mul(x).add(p);
            p = p.mul(x).add(Z::new(a, 0.0));
        }
        (p, dp)
    };
    for _ in 0..200 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.re == 0.0 && p.im == 0.0 {
                continue;
            }
            let ratio = p.div(dp);
            let mut s = Z::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s = s.add(Z::new(1.0, 0.0).div(z[i].sub(z[j])));
                }
            }
            let w = ratio.div(Z::new(1.0, 0.0).sub(ratio.mul(s)));
            if !(w.re.is_finite() && w.im.is_finite()) {
                return None;
            }
            z[i] = z[i].sub(w);
            moved = moved.max(w.abs() / z[i].abs().max(1e-300));
        }
        if moved < 1e-15 {
            break;
        }
    }
    let eps = f64::EPSILON;
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let (p, _) = eval(z[i]);
        let zi = z[i].abs();
        let mut mag = 0.0;
        for &a in cf.iter().rev() {
            mag = mag * zi + a.abs();
        }
        let num = p.abs() + 4.0 * (n as f64 + 1.0) * eps * mag;
        let mut den = an;
        for j in 0..n {
            if j != i {
                den *= z[i].sub(z[j]).abs();
            }
        }
        den *= 1.0 - 8.0 * n as f64 * eps;
        if den <= 0.0 || !den.is_finite() {
            return None;
        }
        radii.push(n as f64 * num / den * (1.0 + 1e-9) + 1e-300);
    }
    for i in 0..n {
        for j in i + 1..n {
            if z[i].sub(z[j]).abs() <= (radii[i] + radii[j]) * (1.0 + 1e-9) {
                return None;
            }
        }
    }
    let mut lo = an;
    let mut hi = an;
    for i in 0..n {
        let a = z[i].abs();
        lo *= (a - radii[i]).max(1.0);
        hi *= (a + radii[i]).max(1.0);
    }
    let slack = 1e-13 * n as f64;
    Some((lo * (1.0 - slack), hi * (1.0 + slack)))
}
