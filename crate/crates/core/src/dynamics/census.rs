use rayon::prelude::*;

use super::height::canonical_height;
use super::orbit::{orbit_with, OrbitOptions, OrbitStatus};
use super::{require_dynamical, RationalMap};
use crate::algnum::{PlaceSet, ProjPoint};
use crate::enumerate::{enum_points, HeightBound};
use crate::error::Result;

pub const DEFAULT_CENSUS_MAX_ITER: usize = 25;

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub max_iter: usize,
    /// Also compute canonical heights, for the minimum-positive proxy.
    pub canonical_heights: bool,
    pub tol: f64,
    pub size_limit_bits: u64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            max_iter: DEFAULT_CENSUS_MAX_ITER,
            canonical_heights: true,
            tol: 1e-6,
            size_limit_bits: super::orbit::DEFAULT_SIZE_LIMIT_BITS,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CensusRow {
    pub point: ProjPoint,
    pub degree: usize,
    /// Multiplicative Weil height of the starting point.
    pub height: f64,
    /// Number of distinct orbit points examined.
    pub orbit_len: usize,
    pub status: OrbitStatus,
    pub integral_count: usize,
    pub canonical_height: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct CensusTable {
    pub rows: Vec<CensusRow>,
    pub max: usize,
    pub average: f64,
    /// Smallest canonical height above the tolerance seen in the census: an
    /// observed stand-in for the minimum over all points of the degree.
    pub min_positive_canonical_height: Option<f64>,
    /// Rows whose orbit was cut off before every integral point was accounted for.
    pub incomplete: usize,
    pub warnings: Vec<String>,
}

impl CensusTable {
    pub fn total(&self) -> usize {
        self.rows.len()
    }

    pub const CSV_HEADER: &'static str = "point_minpoly,point_approx,degree,height,orbit_len,status,integral_count";

    pub fn write_csv(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{:.6},{},{},{}",
                csv_field(&r.point.minpoly_label()),
                csv_field(&r.point.approx_label()),
                r.degree,
                r.height,
                r.orbit_len,
                r.status.label(),
                r.integral_count
            )?;
        }
        Ok(())
    }

    pub fn summary_line(&self) -> String {
        let proxy = match self.min_positive_canonical_height {
            Some(h) => format!("{h:.9}"),
            None => "none".into(),
        };
        format!(
            "summary: points={} max={} average={:.6} incomplete={} min_positive_canonical_height_observed={}",
            self.total(),
            self.max,
            self.average,
            self.incomplete,
            proxy
        )
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Count S-integral points in the orbit of every point of degree at most `d`
/// and height at most `bound`.
pub fn orbit_integral_census(
    f: &RationalMap,
    d: usize,
    bound: &HeightBound,
    s: &PlaceSet,
    max_iter: usize,
) -> Result<CensusTable> {
    let opts = CensusOptions {
        max_iter,
        ..CensusOptions::default()
    };
    orbit_integral_census_with(f, d, bound, s, &opts)
}

pub fn orbit_integral_census_with(
    f: &RationalMap,
    d: usize,
    bound: &HeightBound,
    s: &PlaceSet,
    opts: &CensusOptions,
) -> Result<CensusTable> {
    require_dynamical(f)?;
    let mut warnings = Vec::new();
    if f.second_iterate_is_polynomial() {
        warnings.push(format!(
            "the second iterate of {f} is a polynomial; finiteness of integral orbit points is not expected"
        ));
    }
    let mut points = enum_points(d, bound)?;
    points.sort_by(|a, b| a.canonical_cmp(b));
    let orbit_opts = OrbitOptions {
        max_iter: opts.max_iter,
        stop_on_escape: true,
        size_limit_bits: opts.size_limit_bits,
    };
    let rows: Result<Vec<CensusRow>> = points
        .into_par_iter()
        .map(|p| {
            let rep = orbit_with(f, &p, s, &orbit_opts)?;
            let canonical = if opts.canonical_heights {
                canonical_height(f, &p, opts.tol).ok()
            } else {
                None
            };
            Ok(CensusRow {
                degree: p.degree(),
                height: p.height()?,
                orbit_len: rep.points.len(),
                integral_count: rep.integral_count(),
                status: rep.status,
                canonical_height: canonical,
                point: p,
            })
        })
        .collect();
    let rows = rows?;
    let max = rows.iter().map(|r| r.integral_count).max().unwrap_or(0);
    let sum: usize = rows.iter().map(|r| r.integral_count).sum();
    let average = if rows.is_empty() { 0.0 } else { sum as f64 / rows.len() as f64 };
    let min_positive_canonical_height = rows
        .iter()
        .filter_map(|r| r.canonical_height)
        .filter(|&h| h > opts.tol)
        .min_by(|a, b| a.total_cmp(b));
    let incomplete = rows.iter().filter(|r| !r.status.is_complete()).count();
    Ok(CensusTable {
        rows,
        max,
        average,
        min_positive_canonical_height,
        incomplete,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zpoly::IntPoly;

    #[test]
    fn height_one_census() {
        let phi = RationalMap::new(IntPoly::from_i64s(&[-1, 0, 1]), IntPoly::from_i64s(&[0, 1])).unwrap();
        let t = orbit_integral_census(&phi, 1, &HeightBound::integer(1).unwrap(), &PlaceSet::archimedean(), 20).unwrap();
        assert_eq!(t.total(), 4);
        assert!(t.rows[0].point.is_infinity());
        // infinity is fixed; 0 -> inf; 1 -> 0 -> inf; -1 -> 0 -> inf
        let counts: Vec<usize> = t.rows.iter().map(|r| r.integral_count).collect();
        assert_eq!(counts.iter().sum::<usize>(), 5);
        assert_eq!(t.max, 2);
        assert!(t.warnings.is_empty());
        assert_eq!(t.incomplete, 0);
    }

    #[test]
    fn polynomial_control_warns() {
        let sq = RationalMap::polynomial(IntPoly::from_i64s(&[0, 0, 1])).unwrap();
        let opts = CensusOptions {
            max_iter: 5,
            ..CensusOptions::default()
        };
        let t = orbit_integral_census_with(&sq, 1, &HeightBound::integer(3).unwrap(), &PlaceSet::archimedean(), &opts).unwrap();
        assert_eq!(t.warnings.len(), 1);
        for r in &t.rows {
            if let Some(q) = r.point.finite().and_then(|a| a.to_rational()) {
                if q.is_integer() {
                    assert_eq!(r.integral_count, r.orbit_len);
                }
            }
        }
    }
}
