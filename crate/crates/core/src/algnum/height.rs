//! Absolute multiplicative Weil height via the Mahler measure of the
//! minimal polynomial, with rigorous enclosures and an exact decision
//! procedure for comparisons against integer bounds.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{pow2_inv, AlgebraicNumber, ProjPoint};
use crate::dyadic::{CBall, CDyadic, Dyadic, Round};
use crate::error::{Error, Result};
use crate::zpoly::{dyadic_round, isolate_roots, ComplexBox, IntPoly};

const WORK_BITS: u64 = 96;
/// Relative width of the Mahler measure enclosure reported as converged.
const TARGET_REL_BITS: i64 = 50;

/// Bounds on `|z|` over a root box.
pub(crate) fn root_abs_bounds(bx: &ComplexBox) -> (Dyadic, Dyadic) {
    let (lo2, hi2) = bx.abs_sq_bounds();
    let lo = dyadic_round(&lo2, WORK_BITS, Round::Down).sqrt(WORK_BITS, Round::Down);
    let hi = dyadic_round(&hi2, WORK_BITS, Round::Up).sqrt(WORK_BITS, Round::Up);
    (lo, hi)
}

fn bounds_from_boxes(f: &IntPoly, boxes: &[ComplexBox]) -> (Dyadic, Dyadic) {
    let one = Dyadic::one();
    let mut lo = Dyadic::from_int(f.lc().abs());
    let mut hi = lo.clone();
    for b in boxes {
        let (a, c) = root_abs_bounds(b);
        lo = (&lo * &Dyadic::max(&a, &one)).round_rel(WORK_BITS, Round::Down);
        hi = (&hi * &Dyadic::max(&c, &one)).round_rel(WORK_BITS, Round::Up);
    }
    (lo, hi)
}

fn converged(lo: &Dyadic, hi: &Dyadic) -> bool {
    &(hi - lo) <= &lo.mul_pow2(-TARGET_REL_BITS)
}

/// Rigorous bounds on the Mahler measure of a squarefree polynomial,
/// tightened to a relative width of about `2^-50`.
pub fn mahler_measure_bounds(f: &IntPoly) -> Result<(Dyadic, Dyadic)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.deg() == 0 {
        let c = Dyadic::from_int(f.lc().abs());
        return Ok((c.clone(), c));
    }
    let cap = crate::precision_cap().max(64);
    let mut bits = 64u32;
    loop {
        let boxes = isolate_roots(f, &pow2_inv(bits))?;
        let (lo, hi) = bounds_from_boxes(f, &boxes);
        if converged(&lo, &hi) {
            return Ok((lo, hi));
        }
        if bits >= cap {
            return Err(Error::cap(cap, "Mahler measure"));
        }
        bits = (bits * 2).min(cap);
    }
}

/// Natural log of the Weil height.
pub fn log_height(a: &AlgebraicNumber) -> Result<f64> {
    if let Some(q) = a.to_rational() {
        let m = q.numer().abs().max(q.denom().abs());
        return Ok(Dyadic::from_int(m).ln_abs());
    }
    let (lo, hi) = mahler_measure_bounds(a.minpoly())?;
    Ok(0.5 * (lo.ln_abs() + hi.ln_abs()) / a.degree() as f64)
}

/// Absolute multiplicative Weil height `H(a) = M(f)^(1/d)`.
pub fn weil_height(a: &AlgebraicNumber) -> Result<f64> {
    Ok(log_height(a)?.exp())
}

impl ProjPoint {
    /// Weil height; the point at infinity has height 1.
    pub fn height(&self) -> Result<f64> {
        match self {
            ProjPoint::Infinity => Ok(1.0),
            ProjPoint::Finite(a) => weil_height(a),
        }
    }

    pub fn log_height(&self) -> Result<f64> {
        match self {
            ProjPoint::Infinity => Ok(0.0),
            ProjPoint::Finite(a) => log_height(a),
        }
    }

    /// Exact comparison of `H(P)` with the integer `b`.
    pub fn compare_height(&self, b: &BigInt) -> Result<Ordering> {
        match self {
            ProjPoint::Infinity => Ok(BigInt::one().cmp(b)),
            ProjPoint::Finite(a) => compare_mahler(a.minpoly(), &b.pow(a.degree() as u32)),
        }
    }
}

enum Exact {
    Decided(Ordering),
    /// `M(f) != t` is proven; numerical refinement will separate them.
    NotEqual,
    Undecided,
}

/// Exact comparison of the Mahler measure of the irreducible primitive `f`
/// with the integer `t`.
pub fn compare_mahler(f: &IntPoly, t: &BigInt) -> Result<Ordering> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.deg() <= 1 {
        let m = f.coeff(0).abs().max(f.lc().abs());
        return Ok(m.cmp(t));
    }
    let td = Dyadic::from_int(t.clone());
    let cap = crate::precision_cap().max(64);
    let mut bits = 48u32;
    let mut known_unequal = false;
    loop {
        let boxes = isolate_roots(f, &pow2_inv(bits))?;
        let (lo, hi) = bounds_from_boxes(f, &boxes);
        if hi < td {
            return Ok(Ordering::Less);
        }
        if lo > td {
            return Ok(Ordering::Greater);
        }
        if !known_unequal {
            match exact_compare(f, t, &boxes, bits as u64)? {
                Exact::Decided(o) => return Ok(o),
                Exact::NotEqual => known_unequal = true,
                Exact::Undecided => {}
            }
        }
        if bits >= cap {
            return Err(Error::cap(cap, "height comparison"));
        }
        bits = (bits * 2).min(cap);
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Inside,
    On,
    Outside,
}

fn classify(f: &IntPoly, boxes: &[ComplexBox], prec: u64) -> Option<Vec<Side>> {
    let one = Dyadic::one();
    let rev = f.reversal_raw();
    let reciprocal = rev == *f || rev == -f.clone();
    let mut sides = Vec::with_capacity(boxes.len());
    for b in boxes {
        let (lo, hi) = root_abs_bounds(b);
        if lo > one {
            sides.push(Side::Outside);
            continue;
        }
        if hi < one {
            sides.push(Side::Inside);
            continue;
        }
        // only reciprocal polynomials can have roots on the unit circle
        if !reciprocal {
            return None;
        }
        let inv = b.to_ball().inv(prec)?;
        let hits: Vec<&ComplexBox> = boxes.iter().filter(|c| c.to_ball().intersects(&inv)).collect();
        if hits.len() != 1 {
            return None;
        }
        if *hits[0] == b.conj() {
            sides.push(Side::On);
        } else {
            return None;
        }
    }
    Some(sides)
}

fn exact_compare(f: &IntPoly, t: &BigInt, boxes: &[ComplexBox], bits: u64) -> Result<Exact> {
    let prec = bits + 64;
    let sides = match classify(f, boxes, prec) {
        Some(s) => s,
        None => return Ok(Exact::Undecided),
    };
    let outside: Vec<usize> = (0..boxes.len()).filter(|&i| sides[i] == Side::Outside).collect();
    if outside.is_empty() {
        return Ok(Exact::Decided(f.lc().abs().cmp(t)));
    }
    if !sides.contains(&Side::Inside) {
        return Ok(Exact::Decided(f.coeff(0).abs().cmp(t)));
    }
    // M = |g| with g = lc * (product of the outside roots), a real algebraic
    // integer that is a root of the integer polynomial prod_J (y - lc prod_J z)
    let k = outside.len();
    let balls: Vec<CBall> = boxes.iter().map(|b| b.to_ball()).collect();
    let lc = f.lc();
    let subset_product = |set: &[usize]| {
        let mut acc = CBall::exact(CDyadic::real(Dyadic::from_int(lc.clone())));
        for &i in set {
            acc = acc.mul(&balls[i], prec);
        }
        acc
    };
    let mut products = Vec::new();
    for_each_subset(boxes.len(), k, &mut |set| products.push(subset_product(set)));
    let pi = match ball_poly_from_roots(&products, prec) {
        Some(p) => p,
        None => return Ok(Exact::Undecided),
    };
    let g = subset_product(&outside);
    let mut decided_unequal = true;
    for target in [t.clone(), -t.clone()] {
        let point = CBall::exact(CDyadic::real(Dyadic::from_int(target.clone())));
        if !pi.eval(&target).is_zero() {
            continue;
        }
        decided_unequal = false;
        if !g.intersects(&point) {
            continue;
        }
        let mult = root_multiplicity(&pi, &target);
        let near = products.iter().filter(|p| p.intersects(&point)).count();
        if near == mult {
            return Ok(Exact::Decided(Ordering::Equal));
        }
        return Ok(Exact::Undecided);
    }
    Ok(if decided_unequal { Exact::NotEqual } else { Exact::Undecided })
}

fn for_each_subset(n: usize, k: usize, visit: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, visit);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), visit);
}

/// The integer polynomial with the given roots, when every coefficient ball
/// pins down a unique integer.
fn ball_poly_from_roots(roots: &[CBall], prec: u64) -> Option<IntPoly> {
    let mut c = vec![CBall::exact(CDyadic::real(Dyadic::one()))];
    for r in roots {
        let neg = CBall::exact(CDyadic::zero()).sub(r);
        let mut next = vec![CBall::exact(CDyadic::zero()); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] = next[i + 1].add(ci);
            next[i] = next[i].add(&ci.mul(&neg, prec));
        }
        c = next;
    }
    let half = Dyadic::pow2(-1);
    let mut out = Vec::with_capacity(c.len());
    for b in &c {
        if b.rad >= half {
            return None;
        }
        let n = (&b.mid.re + &half).floor();
        let exact = CBall::exact(CDyadic::real(Dyadic::from_int(n.clone())));
        if !b.intersects(&exact) {
            return None;
        }
        out.push(n);
    }
    Some(IntPoly::new(out))
}

fn root_multiplicity(p: &IntPoly, r: &BigInt) -> usize {
    let lin = IntPoly::new(vec![-r.clone(), BigInt::one()]);
    let mut q = p.clone();
    let mut m = 0;
    while !q.is_zero() && q.eval(r).is_zero() {
        q = q.div_exact(&lin).expect("exact division by a root factor");
        m += 1;
    }
    m
}
