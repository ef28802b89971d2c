//! Rational maps over Q: normalization, composition and iteration, pole
//! counts, exact evaluation on algebraic points, orbits, canonical heights
//! and S-integral orbit censuses.

mod census;
mod eval;
mod height;
mod orbit;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::zpoly::IntPoly;

pub use census::{orbit_integral_census, orbit_integral_census_with, CensusOptions, CensusRow, CensusTable, DEFAULT_CENSUS_MAX_ITER};
pub use height::{canonical_height, HeightBounds};
pub use orbit::{orbit, orbit_with, OrbitOptions, OrbitReport, OrbitStatus};

/// Largest number of coefficients (numerator plus denominator) an iterate may
/// have before [`RationalMap::iterate`] refuses.
pub const DEFAULT_ITERATE_BUDGET: usize = 1 << 16;

/// `z -> p(z) / q(z)` with coprime integer polynomials, joint content 1 and
/// a denominator with positive leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMap {
    num: IntPoly,
    den: IntPoly,
}

impl RationalMap {
    /// Normalize `p / q`. Constant maps are rejected.
    pub fn new(p: IntPoly, q: IntPoly) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (p, q) = if p.is_zero() {
            (p, IntPoly::one())
        } else {
            let g = p.gcd_q(&q);
            if g.deg() > 0 {
                (p.div_exact(&g).expect("gcd divides"), q.div_exact(&g).expect("gcd divides"))
            } else {
                (p, q)
            }
        };
        let m = RationalMap::normalized(p, q);
        if m.degree() == 0 {
            return Err(Error::invalid("constant map"));
        }
        Ok(m)
    }

    /// Joint content and sign normalization of an already coprime pair.
    fn normalized(p: IntPoly, q: IntPoly) -> Self {
        let c = p.content().gcd(&q.content());
        let mut c = if c.is_zero() { BigInt::one() } else { c };
        if q.lc().is_negative() {
            c = -c;
        }
        let div = |f: &IntPoly| IntPoly::new(f.coeffs().iter().map(|a| a / &c).collect());
        RationalMap {
            num: div(&p),
            den: div(&q),
        }
    }

    pub fn polynomial(p: IntPoly) -> Result<Self> {
        RationalMap::new(p, IntPoly::one())
    }

    pub fn identity() -> Self {
        RationalMap {
            num: IntPoly::x(),
            den: IntPoly::one(),
        }
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    /// `max(deg p, deg q)`.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.deg())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// `self(g(z))`.
    pub fn compose(&self, g: &RationalMap) -> RationalMap {
        let r = self.degree();
        let (a, b) = (&g.num, &g.den);
        // b^k for k = 0..=r
        let mut bpow = Vec::with_capacity(r + 1);
        bpow.push(IntPoly::one());
        for k in 1..=r {
            let next = &bpow[k - 1] * b;
            bpow.push(next);
        }
        let hom = |f: &IntPoly| {
            let mut acc = IntPoly::zero();
            for i in (0..=r).rev() {
                acc = &(&acc * a) + &bpow[r - i].scale(&f.coeff(i));
            }
            acc
        };
        // coprime homogeneous forms compose to coprime forms
        RationalMap::normalized(hom(&self.num), hom(&self.den))
    }

    /// The n-th iterate, refusing when it would exceed [`DEFAULT_ITERATE_BUDGET`] coefficients.
    pub fn iterate(&self, n: u32) -> Result<RationalMap> {
        self.iterate_with_budget(n, DEFAULT_ITERATE_BUDGET)
    }

    pub fn iterate_with_budget(&self, n: u32, budget: usize) -> Result<RationalMap> {
        let r = self.degree() as u128;
        let predicted = r
            .checked_pow(n)
            .and_then(|d| d.checked_add(1))
            .and_then(|d| d.checked_mul(2));
        match predicted {
            Some(c) if c <= budget as u128 => {}
            _ => {
                return Err(Error::Budget(format!(
                    "iterate {n} of a degree-{r} map exceeds {budget} coefficients"
                )))
            }
        }
        let mut acc = RationalMap::identity();
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        Ok(acc)
    }

    pub fn second_iterate_is_polynomial(&self) -> bool {
        self.compose(self).is_polynomial()
    }

    /// Number of distinct points of the projective line mapped to infinity.
    pub fn distinct_pole_count(&self) -> usize {
        let finite = if self.den.is_constant() {
            0
        } else {
            self.den.squarefree_part().deg()
        };
        finite + usize::from(self.num.degree().unwrap_or(0) > self.den.deg())
    }

    /// Resultant of the homogenized numerator and denominator (up to sign);
    /// its prime divisors are the primes of bad reduction.
    pub fn homogeneous_resultant(&self) -> BigInt {
        let r = self.degree();
        let dp = self.num.degree().unwrap_or(0);
        let dq = self.den.deg();
        let res = if self.num.is_zero() {
            BigInt::zero()
        } else {
            self.num.resultant(&self.den)
        };
        let extra = if dp < r {
            self.den.lc().pow((r - dp) as u32)
        } else {
            self.num.lc().pow((r - dq) as u32)
        };
        (res * extra).abs()
    }

    /// Coefficient of `z^r` in the numerator and denominator.
    pub(crate) fn top_coeffs(&self) -> (BigInt, BigInt) {
        let r = self.degree();
        (self.num.coeff(r), self.den.coeff(r))
    }

    pub fn display_var<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        MapDisplay { map: self, var }
    }
}

struct MapDisplay<'a> {
    map: &'a RationalMap,
    var: &'a str,
}

impl fmt::Display for MapDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = (&self.map.num, &self.map.den);
        if q.is_one_poly() {
            return write!(f, "{}", p.display_var(self.var));
        }
        write!(f, "({})/({})", p.display_var(self.var), q.display_var(self.var))
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_var("z"))
    }
}

impl fmt::Debug for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMap({self})")
    }
}

trait IsOnePoly {
    fn is_one_poly(&self) -> bool;
}

impl IsOnePoly for IntPoly {
    fn is_one_poly(&self) -> bool {
        self.deg() == 0 && self.coeff(0).is_one()
    }
}

/// Require degree at least two for dynamical operations.
pub(crate) fn require_dynamical(f: &RationalMap) -> Result<()> {
    if f.degree() < 2 {
        return Err(Error::invalid(format!("map {f} has degree {} < 2", f.degree())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn map(n: &[i64], d: &[i64]) -> RationalMap {
        RationalMap::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn normalization() {
        let m = map(&[-2, 0, 2], &[0, -2]);
        assert_eq!(m.num(), &p(&[1, 0, -1]));
        assert_eq!(m.den(), &p(&[0, 1]));
        let c = map(&[-1, 0, 1], &[-1, 1]);
        assert_eq!(c.num(), &p(&[1, 1]));
        assert!(c.den().is_one_poly());
        assert!(RationalMap::new(p(&[3]), p(&[1])).is_err());
        assert!(RationalMap::new(p(&[0, 1]), IntPoly::zero()).is_err());
    }

    #[test]
    fn composition_examples() {
        let inv_sq = map(&[1], &[0, 0, 1]);
        let c = inv_sq.compose(&inv_sq);
        assert_eq!(c.num(), &p(&[0, 0, 0, 0, 1]));
        assert!(c.is_polynomial());
        let phi = map(&[-1, 0, 1], &[0, 1]);
        let phi2 = phi.iterate(2).unwrap();
        assert_eq!(phi2.num(), &p(&[1, 0, -3, 0, 1]));
        assert_eq!(phi2.den(), &p(&[0, -1, 0, 1]));
        assert_eq!(phi.compose(&RationalMap::identity()), phi);
        assert_eq!(phi.iterate(0).unwrap(), RationalMap::identity());
        let sq = map(&[0, 0, 1], &[1]);
        assert_eq!(sq.iterate(3).unwrap().num(), &IntPoly::monomial(1.into(), 8));
        assert!(sq.iterate_with_budget(20, 1000).is_err());
    }

    #[test]
    fn pole_counts_and_polynomial_iterates() {
        let phi = map(&[-1, 0, 1], &[0, 1]);
        assert_eq!(phi.distinct_pole_count(), 2);
        assert_eq!(phi.iterate(2).unwrap().distinct_pole_count(), 4);
        assert_eq!(map(&[0, 0, 1], &[1]).distinct_pole_count(), 1);
        assert!(!phi.second_iterate_is_polynomial());
        assert!(map(&[1], &[0, 0, 0, 1]).second_iterate_is_polynomial());
        assert!(map(&[1, 0, 1], &[1]).second_iterate_is_polynomial());
        assert_eq!(phi.homogeneous_resultant(), BigInt::one());
        assert_eq!(phi.to_string(), "(z^2 - 1)/(z)");
    }
}
