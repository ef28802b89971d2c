use num_bigint::BigInt;
use num_rational::BigRational;

use super::{candidate_factors, select_root, AlgebraicNumber};
use crate::error::{Error, Result};
use crate::zpoly::{ComplexBox, IntPoly};

/// `prod (alpha_i - r)` over the conjugates of `a`, i.e. `(-1)^d f(r) / a_d`.
pub fn norm_shift(a: &AlgebraicNumber, r: &BigRational) -> BigRational {
    let f = a.minpoly();
    let v = f.eval_rational(r) / BigRational::from_integer(f.lc().clone());
    if f.deg() % 2 == 1 {
        -v
    } else {
        v
    }
}

fn shift_box(b: &ComplexBox, q: &BigRational) -> ComplexBox {
    ComplexBox::new(&b.re_lo - q, &b.re_hi - q, b.im_lo.clone(), b.im_hi.clone())
}

fn negate_box(b: &ComplexBox) -> ComplexBox {
    ComplexBox::new(-b.re_hi.clone(), -b.re_lo.clone(), -b.im_hi.clone(), -b.im_lo.clone())
}

/// `f(-x)`, sign-normalized.
fn reflect(f: &IntPoly) -> IntPoly {
    let c: Vec<BigInt> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
        .collect();
    IntPoly::new(c).sign_normalized()
}

/// `a - q` for rational `q`.
fn sub_rational(a: &AlgebraicNumber, q: &BigRational) -> AlgebraicNumber {
    AlgebraicNumber::from_parts(a.minpoly().shift(q).sign_normalized(), shift_box(a.isolating_box(), q))
}

fn neg(a: &AlgebraicNumber) -> AlgebraicNumber {
    AlgebraicNumber::from_parts(reflect(a.minpoly()), negate_box(a.isolating_box()))
}

/// Exact difference `a - b`.
pub fn diff(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    match (a.to_rational(), b.to_rational()) {
        (Some(x), Some(y)) => return Ok(AlgebraicNumber::from_rational(&(x - y))),
        (None, Some(y)) => return Ok(sub_rational(a, &y)),
        (Some(x), None) => return Ok(neg(&sub_rational(b, &x))),
        (None, None) => {}
    }
    if a.equals(b)? {
        return Ok(AlgebraicNumber::zero());
    }
    let r = IntPoly::composed_difference(a.minpoly(), b.minpoly())?;
    let cands = candidate_factors(&r)?;
    select_root(
        &cands,
        |bits| Ok(Some(a.ball(bits + 8)?.sub(&b.ball(bits + 8)?))),
        "difference of algebraic numbers",
    )
}

/// Exact reciprocal `1 / a`.
pub fn invert(a: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    if a.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if let Some(q) = a.to_rational() {
        return Ok(AlgebraicNumber::from_rational(&(BigRational::from_integer(1.into()) / q)));
    }
    let rev = a.minpoly().reversal();
    select_root(
        std::slice::from_ref(&rev),
        |bits| {
            let ball = a.ball(bits + 8)?;
            Ok(ball.inv(bits as u64 + 64))
        },
        "inverse of an algebraic number",
    )
}
