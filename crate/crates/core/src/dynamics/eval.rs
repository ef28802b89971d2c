use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::RationalMap;
use crate::algnum::{select_root, ProjPoint};
use crate::dyadic::CBall;
use crate::error::Result;

impl RationalMap {
    /// Exact image of a point.
    pub fn eval_point(&self, pt: &ProjPoint) -> Result<ProjPoint> {
        let a = match pt {
            ProjPoint::Infinity => return Ok(self.eval_infinity()),
            ProjPoint::Finite(a) => a,
        };
        if let Some(x) = a.to_rational() {
            return Ok(self.eval_rational(x.numer(), x.denom()));
        }
        let f = a.minpoly();
        if f.gcd_q(&self.den).deg() > 0 {
            // the irreducible minimal polynomial divides the denominator
            return Ok(ProjPoint::Infinity);
        }
        // the resultant is a power of the minimal polynomial of the image
        let r = f.image_resultant(&self.num, &self.den)?;
        let g = r.primitive_part().squarefree_part().sign_normalized();
        if g.deg() == 1 {
            return Ok(ProjPoint::rational(&BigRational::new(-g.coeff(0), g.coeff(1))));
        }
        let extra = 32 + 2 * self.max_coeff_bits() as u32;
        let image = select_root(
            std::slice::from_ref(&g),
            |bits| {
                let prec = (bits + extra) as u64 + 64;
                let z = a.ball(bits + extra)?;
                let pv = CBall::eval_int_poly(self.num.coeffs(), &z, prec);
                let qv = CBall::eval_int_poly(self.den.coeffs(), &z, prec);
                Ok(pv.div(&qv, prec))
            },
            "selecting the image of an algebraic point",
        )?;
        Ok(ProjPoint::Finite(image))
    }

    fn eval_infinity(&self) -> ProjPoint {
        let dp = self.num.degree().unwrap_or(0);
        let dq = self.den.deg();
        if dp > dq {
            ProjPoint::Infinity
        } else if dp == dq {
            ProjPoint::rational(&BigRational::new(self.num.lc().clone(), self.den.lc().clone()))
        } else {
            ProjPoint::integer(0)
        }
    }

    /// Image of `u / v` through the homogeneous forms.
    pub(crate) fn eval_rational(&self, u: &BigInt, v: &BigInt) -> ProjPoint {
        let r = self.degree();
        let x = self.num.eval_homogeneous(u, v, r);
        let y = self.den.eval_homogeneous(u, v, r);
        if y.is_zero() {
            ProjPoint::Infinity
        } else {
            ProjPoint::rational(&BigRational::new(x, y))
        }
    }

    fn max_coeff_bits(&self) -> u64 {
        self.num
            .coeffs()
            .iter()
            .chain(self.den.coeffs())
            .map(|c| c.bits())
            .max()
            .unwrap_or(1)
    }
}
