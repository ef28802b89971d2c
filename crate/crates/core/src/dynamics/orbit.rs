use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::height::{point_bits, HeightBounds};
use super::{require_dynamical, RationalMap};
use crate::algnum::{is_s_integral, PlaceSet, ProjPoint};
use crate::error::Result;
use crate::primes::remove_factor;

/// Orbit points above this size (total coefficient bits) stop the iteration.
pub const DEFAULT_SIZE_LIMIT_BITS: u64 = 1 << 22;

#[derive(Clone, Debug)]
pub struct OrbitOptions {
    /// Number of map applications; the orbit holds at most `max_iter + 1` points.
    pub max_iter: usize,
    /// Stop once no later point can be S-integral.
    pub stop_on_escape: bool,
    pub size_limit_bits: u64,
}

impl OrbitOptions {
    pub fn new(max_iter: usize) -> Self {
        OrbitOptions {
            max_iter,
            stop_on_escape: false,
            size_limit_bits: DEFAULT_SIZE_LIMIT_BITS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitStatus {
    /// `points[tail + cycle]` would repeat `points[tail]`.
    Preperiodic { tail: usize, cycle: usize },
    /// Iteration stopped at `max_iter`. `wandering` is set when the height of
    /// the last point exceeds the bound forcing a positive canonical height.
    Truncated { max_iter: usize, wandering: bool },
    /// From `index` on no point is S-integral: at some prime outside S of
    /// good reduction the point reduces to infinity, which the reduced map fixes.
    Escaped { index: usize },
    /// The point at `index` exceeded the size limit.
    SizeLimit { index: usize },
}

impl OrbitStatus {
    /// Short machine-friendly label.
    pub fn label(&self) -> String {
        match self {
            OrbitStatus::Preperiodic { tail, cycle } => format!("preperiodic(tail={tail};cycle={cycle})"),
            OrbitStatus::Truncated { max_iter, wandering } => {
                if *wandering {
                    format!("truncated(max_iter={max_iter};wandering)")
                } else {
                    format!("truncated(max_iter={max_iter})")
                }
            }
            OrbitStatus::Escaped { index } => format!("escaped(index={index})"),
            OrbitStatus::SizeLimit { index } => format!("size_limit(index={index})"),
        }
    }

    /// Whether the recorded points account for every S-integral orbit point.
    pub fn is_complete(&self) -> bool {
        matches!(self, OrbitStatus::Preperiodic { .. } | OrbitStatus::Escaped { .. })
    }
}

impl fmt::Display for OrbitStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Debug)]
pub struct OrbitReport {
    pub start: ProjPoint,
    /// Pairwise distinct orbit points, `points[0] = start`.
    pub points: Vec<ProjPoint>,
    pub status: OrbitStatus,
    /// Indices of S-integral points.
    pub integral_hits: Vec<usize>,
}

impl OrbitReport {
    /// Number of distinct S-integral orbit points found.
    pub fn integral_count(&self) -> usize {
        self.integral_hits.len()
    }
}

/// Orbit of `pt` for up to `max_iter` steps, stopping at the first exact repetition.
pub fn orbit(f: &RationalMap, pt: &ProjPoint, max_iter: usize, s: &PlaceSet) -> Result<OrbitReport> {
    orbit_with(f, pt, s, &OrbitOptions::new(max_iter))
}

pub fn orbit_with(f: &RationalMap, pt: &ProjPoint, s: &PlaceSet, opts: &OrbitOptions) -> Result<OrbitReport> {
    require_dynamical(f)?;
    let escape = EscapeTest::new(f, s);
    let mut points = vec![pt.clone()];
    let mut hits = Vec::new();
    let status = loop {
        let n = points.len() - 1;
        let cur = &points[n];
        if is_s_integral(cur, s) {
            hits.push(n);
        } else if opts.stop_on_escape && escape.escapes(cur) {
            break OrbitStatus::Escaped { index: n };
        }
        if point_bits(cur) > opts.size_limit_bits {
            break OrbitStatus::SizeLimit { index: n };
        }
        if n >= opts.max_iter {
            let wandering = is_wandering(f, cur).unwrap_or(false);
            break OrbitStatus::Truncated {
                max_iter: opts.max_iter,
                wandering,
            };
        }
        let next = f.eval_point(cur)?;
        let mut repeat = None;
        for (j, q) in points.iter().enumerate() {
            if q.equals(&next)? {
                repeat = Some(j);
                break;
            }
        }
        if let Some(j) = repeat {
            break OrbitStatus::Preperiodic {
                tail: j,
                cycle: n + 1 - j,
            };
        }
        points.push(next);
    };
    Ok(OrbitReport {
        start: pt.clone(),
        points,
        status,
        integral_hits: hits,
    })
}

/// `h(P) > C / (r - 1)` forces a positive canonical height.
fn is_wandering(f: &RationalMap, pt: &ProjPoint) -> Result<bool> {
    let hb = HeightBounds::of(f)?;
    let bound = hb.global_constant() / (f.degree() as f64 - 1.0);
    Ok(pt.log_height()? > bound * (1.0 + 1e-9) + 1e-9)
}

/// Detects points whose whole forward orbit avoids the S-integers.
///
/// If a prime `l` outside S divides the leading coefficient of the minimal
/// polynomial, some place above `l` sees the point near infinity. When `l`
/// does not divide the resultant and the reduced map fixes infinity, every
/// later point stays near infinity at that place.
struct EscapeTest {
    s_primes: Vec<u64>,
    resultant: BigInt,
    /// Coefficient of `z^r` in the denominator; the reduced map fixes
    /// infinity exactly at primes dividing it.
    top_den: BigInt,
}

impl EscapeTest {
    fn new(f: &RationalMap, s: &PlaceSet) -> Self {
        EscapeTest {
            s_primes: s.primes().to_vec(),
            resultant: f.homogeneous_resultant(),
            top_den: f.top_coeffs().1,
        }
    }

    fn escapes(&self, pt: &ProjPoint) -> bool {
        let a = match pt {
            ProjPoint::Infinity => return false,
            ProjPoint::Finite(a) => a,
        };
        let mut m = a.leading_coeff().abs();
        for &p in &self.s_primes {
            m = remove_factor(&m, p).1;
        }
        if !self.resultant.is_zero() {
            loop {
                let g = m.gcd(&self.resultant);
                if g.is_one() {
                    break;
                }
                m /= g;
            }
        }
        !m.gcd(&self.top_den).is_one()
    }
}
