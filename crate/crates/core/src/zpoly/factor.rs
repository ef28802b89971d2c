//! Factorization over the integers: squarefree decomposition, then for each
//! squarefree part a modular factorization, Hensel lifting and recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modp::FpPoly;
use super::IntPoly;
use crate::error::{Error, Result};
use crate::primes::{big_mod, primes};

/// Result of [`IntPoly::factor_z`]: `content * prod f_i^m_i == f` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

impl IntPoly {
    /// Complete factorization into primitive irreducibles over Q with positive
    /// leading coefficients, sorted by degree and then by coefficients.
    pub fn factor_z(&self) -> Result<Factorization> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (c, pp) = self.content_primitive()?;
        let content = if self.lc().is_negative() { -c } else { c };
        let mut factors = Vec::new();
        for (s, mult) in pp.squarefree_decomposition() {
            for g in factor_squarefree(&s) {
                factors.push((g, mult));
            }
        }
        sort_factors(&mut factors);
        Ok(Factorization { content, factors })
    }

    /// Irreducible over Q and of positive degree (content is ignored).
    pub fn is_irreducible(&self) -> bool {
        if self.deg() == 0 {
            return false;
        }
        if self.deg() == 1 {
            return true;
        }
        let pp = self.primitive_part();
        if pp.coeff(0).is_zero() {
            return false;
        }
        if !pp.gcd_q(&pp.derivative()).is_constant() {
            return false;
        }
        factor_squarefree(&pp).len() == 1
    }
}

fn sort_factors(v: &mut [(IntPoly, u32)]) {
    v.sort_by(|a, b| (a.0.deg(), a.0.coeffs()).cmp(&(b.0.deg(), b.0.coeffs())));
}

/// Irreducible factors of a primitive squarefree polynomial with positive
/// leading coefficient.
pub(super) fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let mut out = Vec::new();
    let mut f = f.clone();
    if f.coeff(0).is_zero() {
        out.push(IntPoly::x());
        f = IntPoly::new(f.coeffs()[1..].to_vec());
    }
    match f.deg() {
        0 => {}
        1 => out.push(f),
        _ => out.extend(zassenhaus(&f)),
    }
    out
}

fn zassenhaus(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.deg();
    // try a handful of good primes and keep the one with fewest modular factors
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    for p in primes().skip(1) {
        if big_mod(f.lc(), p) == 0 {
            continue;
        }
        let fp = FpPoly::from_int(f, p);
        if fp.gcd(&fp.derivative()).deg() > 0 {
            continue;
        }
        let facs: Vec<FpPoly> = fp.factor().into_iter().map(|(g, _)| g).collect();
        if facs.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 || (tried >= 2 && n <= 3) {
            break;
        }
    }
    let (p, modular) = best.expect("a good prime exists for a squarefree polynomial");

    // bound for coefficients of lc(f) * (any factor of f)
    let norm2 = f.coeffs().iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound = (BigInt::one() << n) * norm2 * f.lc().abs() * 2;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus = &modulus * &modulus;
    }
    let lifted = hensel_lift_all(f, &modular, p, &modulus);
    recombine(f, lifted, &modulus)
}

fn reduce(f: &IntPoly, m: &BigInt) -> IntPoly {
    IntPoly::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(f: &IntPoly, m: &BigInt) -> IntPoly {
    let half = m / 2;
    IntPoly::new(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn mulm(a: &IntPoly, b: &IntPoly, m: &BigInt) -> IntPoly {
    reduce(&(a * b), m)
}

/// Division by a monic polynomial modulo `m`.
fn divrem_monic(f: &IntPoly, h: &IntPoly, m: &BigInt) -> (IntPoly, IntPoly) {
    debug_assert!(h.lc().is_one());
    let f = reduce(f, m);
    let dh = h.deg();
    let mut r = f.coeffs().to_vec();
    if r.len() <= dh {
        return (IntPoly::zero(), f);
    }
    let mut q = vec![BigInt::zero(); r.len() - dh];
    for i in (0..q.len()).rev() {
        let t = r[i + dh].mod_floor(m);
        if t.is_zero() {
            continue;
        }
        for (j, hc) in h.coeffs().iter().enumerate() {
            r[i + j] = (&r[i + j] - &t * hc).mod_floor(m);
        }
        q[i] = t;
    }
    (IntPoly::new(q), reduce(&IntPoly::new(r), m))
}

/// `s, t` with `s*g + t*h = 1` over `F_p`.
fn ext_gcd_mod(g: &FpPoly, h: &FpPoly) -> (FpPoly, FpPoly) {
    let p = g.modulus();
    let (mut r0, mut r1) = (g.clone(), h.clone());
    let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
    let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s2 = s0.sub(&q.mul(&s1));
        let t2 = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    let inv = crate::primes::inv_mod(r0.lc(), p);
    (s0.scale(inv), t0.scale(inv))
}

/// Lift `f = lc * prod u_i (mod p)` to a factorization modulo `modulus`,
/// a power of `p`; returns monic lifts of the `u_i`.
fn hensel_lift_all(f: &IntPoly, u: &[FpPoly], p: u64, modulus: &BigInt) -> Vec<IntPoly> {
    if u.len() == 1 {
        let inv = f.lc().modinv(modulus).expect("lc is a unit");
        return vec![reduce(&f.scale(&inv), modulus)];
    }
    let k = u.len() / 2;
    let prod = |fs: &[FpPoly]| fs.iter().fold(FpPoly::one(p), |a, b| a.mul(b));
    let gp = prod(&u[..k]).scale(big_mod(f.lc(), p));
    let hp = prod(&u[k..]);
    let (g, h) = hensel_two(f, &gp, &hp, p, modulus);
    // g carries the leading coefficient; make it monic before recursing
    let inv = f.lc().modinv(modulus).expect("lc is a unit");
    let g = reduce(&g.scale(&inv), modulus);
    let mut out = hensel_lift_all(&g, &u[..k], p, modulus);
    out.extend(hensel_lift_all(&h, &u[k..], p, modulus));
    out
}

/// Quadratic two-factor lifting: from `f = g h (mod p)` with `h` monic to
/// `f = g* h* (mod modulus)`.
fn hensel_two(
    f: &IntPoly,
    g0: &FpPoly,
    h0: &FpPoly,
    p: u64,
    modulus: &BigInt,
) -> (IntPoly, IntPoly) {
    let (s0, t0) = ext_gcd_mod(g0, h0);
    let (mut g, mut h, mut s, mut t) = (g0.to_int(), h0.to_int(), s0.to_int(), t0.to_int());
    let mut m = BigInt::from(p);
    while &m < modulus {
        let m2 = &m * &m;
        let e = reduce(&(f - &(&g * &h)), &m2);
        let (q, r) = divrem_monic(&mulm(&s, &e, &m2), &h, &m2);
        let g1 = reduce(&(&(&g + &(&t * &e)) + &(&q * &g)), &m2);
        let h1 = reduce(&(&h + &r), &m2);
        let b = reduce(&(&(&(&s * &g1) + &(&t * &h1)) - &IntPoly::one()), &m2);
        let (c, d) = divrem_monic(&mulm(&s, &b, &m2), &h1, &m2);
        let s1 = reduce(&(&s - &d), &m2);
        let t1 = reduce(&(&(&t - &(&t * &b)) - &(&c * &g1)), &m2);
        g = g1;
        h = h1;
        s = s1;
        t = t1;
        m = m2;
    }
    (reduce(&g, modulus), reduce(&h, modulus))
}

/// Combine lifted modular factors into true factors by trial over subsets.
fn recombine(f: &IntPoly, mut lifted: Vec<IntPoly>, modulus: &BigInt) -> Vec<IntPoly> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        let r = lifted.len();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let lc = rest.lc().clone();
            let cand = idx
                .iter()
                .fold(IntPoly::constant(lc.clone()), |a, &i| mulm(&a, &lifted[i], modulus));
            let cand = symmetric(&cand, modulus).primitive_part();
            if cand.deg() > 0 && quick_divides(&cand, &rest) {
                if let Some(q) = rest.div_exact(&cand) {
                    out.push(cand);
                    rest = q.primitive_part();
                    for &i in idx.iter().rev() {
                        lifted.remove(i);
                    }
                    found = true;
                    break;
                }
            }
            if !next_subset(&mut idx, r) {
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if rest.deg() > 0 {
        out.push(rest);
    }
    out
}

/// Cheap necessary conditions for `g | f` over Z.
fn quick_divides(g: &IntPoly, f: &IntPoly) -> bool {
    f.lc().is_multiple_of(g.lc()) && (g.coeff(0).is_zero() || f.coeff(0).is_multiple_of(&g.coeff(0)))
}

/// Advance `idx` to the next `k`-subset of `0..n` in lexicographic order.
fn next_subset(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn multiply_back(fz: &Factorization) -> IntPoly {
        let mut acc = IntPoly::constant(fz.content.clone());
        for (g, m) in &fz.factors {
            acc = &acc * &g.pow(*m);
        }
        acc
    }

    #[test]
    fn spec_examples() {
        let f = p(&[-1, 0, 0, 0, 1]);
        let fz = f.factor_z().unwrap();
        assert_eq!(
            fz.factors,
            vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1), (p(&[1, 0, 1]), 1)]
        );
        assert_eq!(multiply_back(&fz), f);

        let fz = p(&[-2, 0, 1]).factor_z().unwrap();
        assert_eq!(fz.factors, vec![(p(&[-2, 0, 1]), 1)]);

        let fz = p(&[-4, 0, 4]).factor_z().unwrap();
        assert_eq!(fz.content, BigInt::from(4));
        assert_eq!(fz.factors, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
    }

    #[test]
    fn needs_recombination() {
        // x^4 + 1 is irreducible over Q but splits modulo every prime
        let f = p(&[1, 0, 0, 0, 1]);
        assert_eq!(f.factor_z().unwrap().factors, vec![(f.clone(), 1)]);
        // Swinnerton-Dyer style product of two quartics
        let g = &p(&[1, 0, -10, 0, 1]) * &p(&[1, 0, 0, 0, 1]);
        let fz = g.factor_z().unwrap();
        assert_eq!(fz.factors.len(), 2);
        assert_eq!(multiply_back(&fz), g);
    }

    #[test]
    fn mixed_multiplicities_and_signs() {
        let f = &(&p(&[-1, 2]).pow(2) * &p(&[3, 0, 1])) * &p(&[0, -5]);
        let fz = f.factor_z().unwrap();
        assert_eq!(multiply_back(&fz), f);
        assert_eq!(
            fz.factors,
            vec![(p(&[-1, 2]), 2), (p(&[0, 1]), 1), (p(&[3, 0, 1]), 1)]
        );
    }

    #[test]
    fn larger_products() {
        let a = p(&[7, -3, 0, 2]);
        let b = p(&[-5, 1, 4, 0, 3]);
        let c = p(&[2, 9, -6]);
        let f = &(&a * &b) * &c;
        let fz = f.factor_z().unwrap();
        assert_eq!(multiply_back(&fz), f);
        assert!(fz.factors.iter().all(|(g, _)| g.is_irreducible()));
        assert_eq!(fz.factors.len(), 3);
    }

    #[test]
    fn irreducibility() {
        assert!(p(&[1, 0, 1]).is_irreducible());
        assert!(!p(&[-1, 0, 1]).is_irreducible());
        assert!(!p(&[2]).is_irreducible());
        assert!(p(&[-2, 0, 0, 1]).is_irreducible());
        assert!(!p(&[0, 1, 1]).is_irreducible());
    }
}
