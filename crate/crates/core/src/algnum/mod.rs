//! Exact algebraic numbers: an irreducible primitive minimal polynomial plus
//! an isolating box that selects one of its roots.

mod arith;
mod height;
mod json;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::CBall;
use crate::error::{Error, Result};
use crate::primes::is_prime;
use crate::zpoly::{isolate_roots, ComplexBox, IntPoly};

pub use height::{compare_mahler, log_height, mahler_measure_bounds, weil_height};

/// Width of the boxes produced by [`roots_of`].
const INITIAL_BITS: u32 = 24;

pub(crate) fn pow2_inv(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits as usize)
}

#[derive(Clone)]
pub struct AlgebraicNumber {
    minpoly: IntPoly,
    bx: ComplexBox,
}

/// A point of the projective line over the algebraic numbers.
#[derive(Clone, Debug)]
pub enum ProjPoint {
    Infinity,
    Finite(AlgebraicNumber),
}

/// A finite set of rational primes; the archimedean place is always implied.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PlaceSet {
    primes: Vec<u64>,
}

impl PlaceSet {
    pub fn new(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut v: Vec<u64> = primes.into_iter().collect();
        if let Some(&p) = v.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        v.sort_unstable();
        v.dedup();
        Ok(PlaceSet { primes: v })
    }

    /// Only the archimedean place.
    pub fn archimedean() -> Self {
        PlaceSet::default()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }

    /// `inf` or `inf,2,3`-style label.
    pub fn label(&self) -> String {
        let mut s = String::from("inf");
        for p in &self.primes {
            s.push(',');
            s.push_str(&p.to_string());
        }
        s
    }
}

impl AlgebraicNumber {
    pub fn from_rational(q: &BigRational) -> Self {
        AlgebraicNumber {
            minpoly: IntPoly::linear_for(q),
            bx: ComplexBox::point(q.clone(), BigRational::zero()),
        }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        AlgebraicNumber::from_rational(&BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        AlgebraicNumber::from_integer(0)
    }

    /// Build from a minimal polynomial and a box isolating one of its roots.
    ///
    /// The polynomial is made primitive; it must be irreducible, and the box
    /// must meet exactly one root after refinement.
    pub fn new(minpoly: &IntPoly, bx: ComplexBox) -> Result<Self> {
        let f = checked_minpoly(minpoly)?;
        let roots = isolate_roots(&f, &bx.width().max(pow2_inv(INITIAL_BITS)))?;
        let hits: Vec<&ComplexBox> = roots.iter().filter(|r| r.intersects(&bx)).collect();
        if hits.is_empty() {
            return Err(Error::invalid("box contains no root of the polynomial"));
        }
        let mut a = AlgebraicNumber { minpoly: f, bx };
        if hits.len() > 1 || a.bx.width() > pow2_inv(INITIAL_BITS) {
            // the box may be loose: demand a unique root inside it
            let roots = isolate_roots(&a.minpoly, &pow2_inv(48))?;
            let inside: Vec<&ComplexBox> = roots.iter().filter(|r| a.bx.contains_box(r)).collect();
            let meets = roots.iter().filter(|r| r.intersects(&a.bx)).count();
            if inside.len() != 1 || meets != 1 {
                return Err(Error::invalid("box does not isolate a single root"));
            }
            a.bx = inside[0].clone();
        }
        Ok(a)
    }

    /// The root of `minpoly` nearest to `(re, im)`.
    pub fn nearest_root(minpoly: &IntPoly, re: f64, im: f64) -> Result<Self> {
        let roots = roots_of(&checked_minpoly(minpoly)?)?;
        let dist = |a: &AlgebraicNumber| {
            let (x, y) = a.approx();
            (x - re).hypot(y - im)
        };
        roots
            .into_iter()
            .min_by(|a, b| dist(a).partial_cmp(&dist(b)).unwrap_or(Ordering::Equal))
            .ok_or_else(|| Error::invalid("no roots"))
    }

    pub(crate) fn from_parts(minpoly: IntPoly, bx: ComplexBox) -> Self {
        AlgebraicNumber { minpoly, bx }
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn isolating_box(&self) -> &ComplexBox {
        &self.bx
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    /// Leading coefficient of the primitive minimal polynomial.
    pub fn leading_coeff(&self) -> &BigInt {
        self.minpoly.lc()
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(BigRational::new(-self.minpoly.coeff(0), self.minpoly.coeff(1)))
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.is_rational() && self.minpoly.coeff(0).is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.bx.is_real()
    }

    /// Center of the isolating box as floating point.
    pub fn approx(&self) -> (f64, f64) {
        if let Some(q) = self.to_rational() {
            return (crate::zpoly::rat_f64(&q), 0.0);
        }
        self.bx.center_f64()
    }

    /// All roots of the minimal polynomial, this one included.
    pub fn conjugates(&self) -> Result<Vec<AlgebraicNumber>> {
        roots_of(&self.minpoly)
    }

    /// Same number with an isolating box of width at most `eps`.
    pub fn refine(&self, eps: &BigRational) -> Result<AlgebraicNumber> {
        if self.bx.width() <= *eps {
            return Ok(self.clone());
        }
        let (boxes, i) = locate(&self.minpoly, &[&self.bx], eps)?;
        Ok(AlgebraicNumber {
            minpoly: self.minpoly.clone(),
            bx: boxes[i[0]].clone(),
        })
    }

    /// A ball enclosing the number with radius about `2^-bits`.
    pub fn ball(&self, bits: u32) -> Result<CBall> {
        Ok(self.refine(&pow2_inv(bits))?.bx.to_ball())
    }

    /// Exact equality of algebraic numbers.
    pub fn equals(&self, other: &AlgebraicNumber) -> Result<bool> {
        if self.minpoly != other.minpoly {
            return Ok(false);
        }
        if self.is_rational() {
            return Ok(true);
        }
        if !self.bx.intersects(&other.bx) {
            return Ok(false);
        }
        // boxes of exact roots may be single points
        let (wa, wb) = (self.bx.width(), other.bx.width());
        let eps = if wa.is_zero() || wb.is_zero() { wa.max(wb) } else { wa.min(wb) } / BigInt::from(4);
        if eps.is_zero() {
            return Ok(self.bx == other.bx);
        }
        let (_, idx) = locate(&self.minpoly, &[&self.bx, &other.bx], &eps)?;
        Ok(idx[0] == idx[1])
    }

    /// Deterministic total order: degree, minimal polynomial, then position.
    pub fn canonical_cmp(&self, other: &AlgebraicNumber) -> Ordering {
        (self.degree(), self.minpoly.coeffs())
            .cmp(&(other.degree(), other.minpoly.coeffs()))
            .then_with(|| {
                let (a, b) = (self.bx.center(), other.bx.center());
                a.0.cmp(&b.0).then(a.1.cmp(&b.1))
            })
    }
}

fn checked_minpoly(f: &IntPoly) -> Result<IntPoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.deg() == 0 {
        return Err(Error::invalid("constant polynomial has no roots"));
    }
    let (_, pp) = f.content_primitive()?;
    if !pp.is_irreducible() {
        return Err(Error::Reducible(pp.to_string()));
    }
    Ok(pp)
}

/// Isolate the roots of `f` finely enough that each of the given boxes
/// (each known to isolate one root) meets exactly one fresh box; returns the
/// fresh boxes and, per input box, the index of the root it holds.
pub(crate) fn locate(
    f: &IntPoly,
    old: &[&ComplexBox],
    eps: &BigRational,
) -> Result<(Vec<ComplexBox>, Vec<usize>)> {
    let mut e = eps.clone();
    for _ in 0..64 {
        let boxes = isolate_roots(f, &e)?;
        let mut idx = Vec::with_capacity(old.len());
        for b in old {
            let hits: Vec<usize> = (0..boxes.len()).filter(|&i| boxes[i].intersects(b)).collect();
            if hits.len() == 1 {
                idx.push(hits[0]);
            } else {
                break;
            }
        }
        if idx.len() == old.len() {
            return Ok((boxes, idx));
        }
        e = e / BigInt::from(1u64 << 20);
    }
    Err(Error::cap(crate::precision_cap(), "locating a root"))
}

/// All roots of a primitive irreducible polynomial with positive leading
/// coefficient, ordered by real part and then imaginary part.
pub fn roots_of(f: &IntPoly) -> Result<Vec<AlgebraicNumber>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.deg() == 0 {
        return Err(Error::invalid("constant polynomial has no roots"));
    }
    if !f.is_primitive() || f.lc().is_negative() {
        return Err(Error::invalid(format!(
            "{f} is not primitive with positive leading coefficient"
        )));
    }
    if !f.is_irreducible() {
        return Err(Error::Reducible(f.to_string()));
    }
    Ok(roots_unchecked(f)?)
}

/// [`roots_of`] without the irreducibility check.
pub(crate) fn roots_unchecked(f: &IntPoly) -> Result<Vec<AlgebraicNumber>> {
    let boxes = isolate_roots(f, &pow2_inv(INITIAL_BITS))?;
    Ok(boxes
        .into_iter()
        .map(|bx| AlgebraicNumber {
            minpoly: f.clone(),
            bx,
        })
        .collect())
}

/// Among the roots of the irreducible `candidates`, find the unique one lying
/// in the enclosure produced at each precision (`None` when the enclosure is
/// not yet available at that precision); refines until unique or the
/// precision cap is reached.
pub(crate) fn select_root(
    candidates: &[IntPoly],
    mut enclosure: impl FnMut(u32) -> Result<Option<CBall>>,
    context: &str,
) -> Result<AlgebraicNumber> {
    let cap = crate::precision_cap();
    let mut bits = 16u32;
    loop {
        let ball = match enclosure(bits)? {
            Some(b) => b,
            None if bits >= cap => return Err(Error::cap(cap, context)),
            None => {
                bits = (bits * 2).min(cap);
                continue;
            }
        };
        let mut found: Vec<(usize, ComplexBox)> = Vec::new();
        for (k, h) in candidates.iter().enumerate() {
            if h.deg() == 1 {
                let q = BigRational::new(-h.coeff(0), h.coeff(1));
                if CBall::from_rational(&q, bits as u64 + 64).intersects(&ball) {
                    found.push((k, ComplexBox::point(q, BigRational::zero())));
                }
                continue;
            }
            for b in isolate_roots(h, &pow2_inv(bits))? {
                if b.to_ball().intersects(&ball) {
                    found.push((k, b));
                }
            }
        }
        if found.len() == 1 {
            let (k, b) = found.pop().expect("one match");
            return Ok(AlgebraicNumber {
                minpoly: candidates[k].clone(),
                bx: b,
            });
        }
        if bits >= cap {
            return Err(Error::cap(cap, context));
        }
        bits = (bits * 2).min(cap);
    }
}

/// Irreducible factors of `r`, for use as candidates in [`select_root`].
pub(crate) fn candidate_factors(r: &IntPoly) -> Result<Vec<IntPoly>> {
    Ok(r.factor_z()?.factors.into_iter().map(|(g, _)| g).collect())
}

impl PartialEq for AlgebraicNumber {
    /// Structural equality (same minimal polynomial and box); use
    /// [`AlgebraicNumber::equals`] for equality of the numbers.
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly && self.bx == other.bx
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraicNumber({self})")
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{q}");
        }
        let (re, im) = self.approx();
        write!(f, "root of {} near {}", self.minpoly, format_complex(re, im))
    }
}

pub(crate) fn format_complex(re: f64, im: f64) -> String {
    if im == 0.0 {
        format!("{re:.10}")
    } else if im > 0.0 {
        format!("{re:.10}+{im:.10}i")
    } else {
        format!("{re:.10}-{:.10}i", -im)
    }
}

impl ProjPoint {
    pub fn rational(q: &BigRational) -> Self {
        ProjPoint::Finite(AlgebraicNumber::from_rational(q))
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        ProjPoint::Finite(AlgebraicNumber::from_integer(n))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    pub fn finite(&self) -> Option<&AlgebraicNumber> {
        match self {
            ProjPoint::Infinity => None,
            ProjPoint::Finite(a) => Some(a),
        }
    }

    /// Degree of the field of definition (1 for infinity).
    pub fn degree(&self) -> usize {
        self.finite().map_or(1, |a| a.degree())
    }

    pub fn equals(&self, other: &ProjPoint) -> Result<bool> {
        match (self, other) {
            (ProjPoint::Infinity, ProjPoint::Infinity) => Ok(true),
            (ProjPoint::Finite(a), ProjPoint::Finite(b)) => a.equals(b),
            _ => Ok(false),
        }
    }

    pub fn canonical_cmp(&self, other: &ProjPoint) -> Ordering {
        match (self, other) {
            (ProjPoint::Infinity, ProjPoint::Infinity) => Ordering::Equal,
            (ProjPoint::Infinity, _) => Ordering::Less,
            (_, ProjPoint::Infinity) => Ordering::Greater,
            (ProjPoint::Finite(a), ProjPoint::Finite(b)) => a.canonical_cmp(b),
        }
    }

    /// Minimal polynomial text, or `inf`.
    pub fn minpoly_label(&self) -> String {
        match self {
            ProjPoint::Infinity => "inf".into(),
            ProjPoint::Finite(a) => a.minpoly().to_string(),
        }
    }

    /// Approximate value, or `inf`.
    pub fn approx_label(&self) -> String {
        match self {
            ProjPoint::Infinity => "inf".into(),
            ProjPoint::Finite(a) => {
                let (re, im) = a.approx();
                format_complex(re, im)
            }
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Infinity => write!(f, "inf"),
            ProjPoint::Finite(a) => write!(f, "{a}"),
        }
    }
}

/// Whether `P` is S-integral: finite, with every prime of the leading
/// coefficient of its primitive minimal polynomial in `S`.
pub fn is_s_integral(p: &ProjPoint, s: &PlaceSet) -> bool {
    match p {
        ProjPoint::Infinity => false,
        ProjPoint::Finite(a) => lc_supported_on(a.leading_coeff(), s),
    }
}

/// Whether every prime factor of `n` lies in `s`.
pub(crate) fn lc_supported_on(n: &BigInt, s: &PlaceSet) -> bool {
    let mut m = n.abs();
    for &p in s.primes() {
        m = crate::primes::remove_factor(&m, p).1;
    }
    m.is_one()
}

pub use arith::{diff, invert, norm_shift};
