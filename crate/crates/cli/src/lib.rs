//! Command-line experiments: heights, orbits, integral-point censuses,
//! enumeration counts and the congruence sieve.

pub mod output;
pub mod parse;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Map, Value};

use orbitint::algnum::{is_s_integral, roots_of, AlgebraicNumber, PlaceSet, ProjPoint};
use orbitint::dynamics::{
    canonical_height, orbit_integral_census_with, orbit_with, CensusOptions, OrbitOptions, RationalMap,
    DEFAULT_CENSUS_MAX_ITER,
};
use orbitint::enumerate::{count_points, enum_points, exponent_fit, exponent_fit_s_integral, pol_plus_size, HeightBound};
use orbitint::sieve::{count_f_m, count_g_k, density_experiment, euler_product, SieveContext};

use output::{render, round, Format, Output, Table};
pub use parse::{parse_map, parse_poly, ParseError};

pub const PRECISION_ENV: &str = "ORBITINT_PRECISION_CAP";

#[derive(Parser, Debug, Serialize)]
#[command(name = "orbitint", version, about = "Heights, orbits and integral points of rational maps")]
pub struct Cli {
    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,
    /// Worker threads for counting and census runs (default: all cores).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Recorded in the output header.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format; tables default to csv, single reports to json.
    #[arg(long = "out", global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PointArgs {
    /// A rational point such as `3/5`, or `inf`.
    #[arg(long, conflicts_with = "point_minpoly")]
    pub point: Option<String>,
    /// Minimal polynomial of an algebraic point.
    #[arg(long)]
    pub point_minpoly: Option<String>,
    /// Which root of the minimal polynomial, in the canonical root order.
    #[arg(long, default_value_t = 0)]
    pub root: usize,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Weil height of a point.
    Height {
        #[command(flatten)]
        point: PointArgs,
    },
    /// Canonical height of a point under a map.
    Canheight {
        /// Rational map such as `(z^2-1)/z`.
        #[arg(long)]
        map: String,
        #[command(flatten)]
        point: PointArgs,
        /// Tolerance for the canonical height.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Orbit of a point with its S-integral members.
    Orbit {
        /// Rational map such as `(z^2-1)/z`.
        #[arg(long)]
        map: String,
        #[command(flatten)]
        point: PointArgs,
        /// Number of iterates to examine.
        #[arg(long, default_value_t = DEFAULT_CENSUS_MAX_ITER)]
        max_iter: usize,
        /// Place set, e.g. `inf,2,3`.
        #[arg(long = "S", default_value = "inf")]
        s: String,
    },
    /// Integral orbit points for every point of bounded degree and height.
    Census {
        /// Rational map such as `(z^2-1)/z`.
        #[arg(long)]
        map: String,
        /// Degree of the points.
        #[arg(long)]
        degree: usize,
        /// Height bound.
        #[arg(long)]
        bound: String,
        /// Place set, e.g. `inf,2,3`.
        #[arg(long = "S", default_value = "inf")]
        s: String,
        /// Number of iterates to examine.
        #[arg(long, default_value_t = DEFAULT_CENSUS_MAX_ITER)]
        max_iter: usize,
        /// Tolerance for the canonical height.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// List the points of bounded degree and height.
    Enum {
        /// Degree of the points.
        #[arg(long)]
        degree: usize,
        /// Height bound.
        #[arg(long)]
        bound: String,
        /// Place set, e.g. `inf,2,3`.
        #[arg(long = "S", default_value = "inf")]
        s: String,
    },
    /// Count points over a grid of height bounds and fit the growth exponent.
    Count {
        /// Degree of the points.
        #[arg(long)]
        degree: usize,
        /// Increasing height bounds, comma separated.
        #[arg(long, value_delimiter = ',')]
        grid: Vec<String>,
        /// Place set, e.g. `inf,2,3`.
        #[arg(long = "S", default_value = "inf")]
        s: String,
    },
    /// Degrees and distinct pole counts of the iterates.
    Poles {
        /// Rational map such as `(z^2-1)/z`.
        #[arg(long)]
        map: String,
        /// Largest iterate to report.
        #[arg(long, default_value_t = 4)]
        max_n: u32,
    },
    /// Congruence sieve counts for a fixed algebraic point.
    Sieve {
        /// Minimal polynomial of the fixed point.
        #[arg(long)]
        beta_minpoly: String,
        /// Which root of that polynomial (default: largest real root).
        #[arg(long)]
        beta_root: Option<usize>,
        /// Degree of the points.
        #[arg(long)]
        degree: usize,
        /// Number of sieve primes.
        #[arg(long)]
        primes: usize,
        /// Bound on the polynomial coefficients.
        #[arg(long)]
        bound: u64,
        /// Places where integrality is relaxed, e.g. `inf,3`.
        #[arg(long = "T", default_value = "inf")]
        t: String,
    },
    /// Proportion of points integral with respect to a fixed algebraic point.
    Density {
        /// Minimal polynomial of the fixed point.
        #[arg(long)]
        beta_minpoly: String,
        /// Which root of that polynomial (default: largest real root).
        #[arg(long)]
        beta_root: Option<usize>,
        /// Degree of the points.
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Increasing height bounds, comma separated.
        #[arg(long, value_delimiter = ',')]
        grid: Vec<String>,
        /// Places where integrality is relaxed, e.g. `inf,3`.
        #[arg(long = "T", default_value = "inf")]
        t: String,
        /// Sieve primes checked against each integral point.
        #[arg(long, default_value_t = 5)]
        primes: usize,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub code: i32,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            kind: "invalid_input",
            message: message.into(),
            code: 1,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": {"kind": self.kind, "message": self.message, "exit_code": self.code}})
    }
}

impl From<orbitint::Error> for CliError {
    fn from(e: orbitint::Error) -> Self {
        use orbitint::Error as E;
        let (kind, code) = match &e {
            E::PrecisionCap { .. } => ("precision_cap", 2),
            E::Budget(_) => ("budget", 2),
            E::ZeroPolynomial => ("zero_polynomial", 1),
            E::InvalidInput(_) => ("invalid_input", 1),
            E::Reducible(_) => ("reducible", 1),
            E::LeadingCoefficientDivisible { .. } => ("leading_coefficient_divisible", 1),
            E::DivisionByZero => ("division_by_zero", 1),
        };
        CliError {
            kind,
            message: e.to_string(),
            code,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError {
            kind: "syntax",
            message: e.to_string(),
            code: 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            kind: "io",
            message: e.to_string(),
            code: 1,
        }
    }
}

type CResult<T> = Result<T, CliError>;

/// `inf`, `2,3` or `inf,2,3`; infinity is always included.
pub fn parse_places(text: &str) -> CResult<PlaceSet> {
    let mut primes = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if tok.eq_ignore_ascii_case("inf") {
            continue;
        }
        primes.push(
            tok.parse::<u64>()
                .map_err(|_| CliError::input(format!("bad place {tok:?} in {text:?}")))?,
        );
    }
    Ok(PlaceSet::new(primes)?)
}

fn parse_rational(text: &str) -> CResult<BigRational> {
    let t = text.trim();
    let bad = || CliError::input(format!("cannot parse {t:?} as a rational number"));
    let (a, b) = t.split_once('/').unwrap_or((t, "1"));
    let a: BigInt = a.trim().parse().map_err(|_| bad())?;
    let b: BigInt = b.trim().parse().map_err(|_| bad())?;
    if b == BigInt::from(0) {
        return Err(CliError::input("zero denominator"));
    }
    Ok(BigRational::new(a, b))
}

/// Roots of a user-supplied irreducible polynomial, made primitive with a
/// positive leading coefficient.
fn roots_of_text(text: &str) -> CResult<Vec<AlgebraicNumber>> {
    let f = parse_poly(text)?.primitive_part().sign_normalized();
    Ok(roots_of(&f)?)
}

fn pick_point(p: &PointArgs) -> CResult<ProjPoint> {
    match (&p.point, &p.point_minpoly) {
        (Some(t), None) => {
            if t.trim().eq_ignore_ascii_case("inf") {
                Ok(ProjPoint::Infinity)
            } else {
                Ok(ProjPoint::rational(&parse_rational(t)?))
            }
        }
        (None, Some(m)) => {
            let roots = roots_of_text(m)?;
            let n = roots.len();
            roots
                .into_iter()
                .nth(p.root)
                .map(ProjPoint::Finite)
                .ok_or_else(|| CliError::input(format!("root index {} out of range 0..{n}", p.root)))
        }
        _ => Err(CliError::input("give exactly one of --point or --point-minpoly")),
    }
}

/// The requested root, or by default the largest real root (the first root
/// when there is none).
fn pick_beta(text: &str, index: Option<usize>) -> CResult<AlgebraicNumber> {
    let roots = roots_of_text(text)?;
    let n = roots.len();
    match index {
        Some(i) => roots
            .into_iter()
            .nth(i)
            .ok_or_else(|| CliError::input(format!("root index {i} out of range 0..{n}"))),
        None => {
            let best = roots
                .iter()
                .filter(|a| a.is_real())
                .max_by(|a, b| a.approx().0.total_cmp(&b.approx().0))
                .cloned();
            Ok(best.unwrap_or_else(|| roots[0].clone()))
        }
    }
}

fn point_fields(m: &mut Map<String, Value>, p: &ProjPoint) {
    m.insert("point_minpoly".into(), p.minpoly_label().into());
    m.insert("point_approx".into(), p.approx_label().into());
    m.insert("degree".into(), p.degree().into());
}

fn parse_bounds(grid: &[String]) -> CResult<Vec<HeightBound>> {
    if grid.is_empty() {
        return Err(CliError::input("empty --grid"));
    }
    let v: Vec<HeightBound> = grid.iter().map(|g| HeightBound::parse(g)).collect::<Result<_, _>>()?;
    if v.windows(2).any(|w| w[0].value() >= w[1].value()) {
        return Err(CliError::input("--grid must be increasing"));
    }
    Ok(v)
}

fn dynamical_map(text: &str) -> CResult<RationalMap> {
    let f = parse_map(text)?;
    if f.degree() < 2 {
        return Err(CliError::input(format!("map {f} has degree {} but degree at least 2 is required", f.degree())));
    }
    Ok(f)
}

fn execute(cmd: &Command) -> CResult<Output> {
    match cmd {
        Command::Height { point } => {
            let p = pick_point(point)?;
            let mut m = Map::new();
            point_fields(&mut m, &p);
            m.insert("height".into(), round(p.height()?, 10).into());
            m.insert("log_height".into(), round(p.log_height()?, 10).into());
            Ok(Output::Report(m))
        }
        Command::Canheight { map, point, tol } => {
            let f = dynamical_map(map)?;
            let p = pick_point(point)?;
            let h = canonical_height(&f, &p, *tol)?;
            let mut m = Map::new();
            m.insert("map".into(), f.to_string().into());
            point_fields(&mut m, &p);
            m.insert("canonical_height".into(), round(h, 10).into());
            m.insert("tol".into(), (*tol).into());
            Ok(Output::Report(m))
        }
        Command::Orbit { map, point, max_iter, s } => {
            let f = dynamical_map(map)?;
            let p = pick_point(point)?;
            let places = parse_places(s)?;
            let rep = orbit_with(&f, &p, &places, &OrbitOptions::new(*max_iter))?;
            let pts: Vec<Value> = rep
                .points
                .iter()
                .enumerate()
                .map(|(i, q)| {
                    json!({
                        "index": i,
                        "minpoly": q.minpoly_label(),
                        "approx": q.approx_label(),
                        "s_integral": is_s_integral(q, &places),
                    })
                })
                .collect();
            let mut m = Map::new();
            m.insert("map".into(), f.to_string().into());
            point_fields(&mut m, &p);
            m.insert("places".into(), places.label().into());
            m.insert("status".into(), rep.status.label().into());
            m.insert("complete".into(), rep.status.is_complete().into());
            m.insert("integral_count".into(), rep.integral_count().into());
            m.insert("integral_indices".into(), json!(rep.integral_hits));
            m.insert("points".into(), Value::Array(pts));
            Ok(Output::Report(m))
        }
        Command::Census {
            map,
            degree,
            bound,
            s,
            max_iter,
            tol,
        } => {
            let f = dynamical_map(map)?;
            let b = HeightBound::parse(bound)?;
            let places = parse_places(s)?;
            let opts = CensusOptions {
                max_iter: *max_iter,
                tol: *tol,
                ..CensusOptions::default()
            };
            let table = orbit_integral_census_with(&f, *degree, &b, &places, &opts)?;
            let mut t = Table::new(&[
                "point_minpoly",
                "point_approx",
                "degree",
                "height",
                "orbit_len",
                "status",
                "integral_count",
            ]);
            for r in &table.rows {
                t.push(vec![
                    r.point.minpoly_label(),
                    r.point.approx_label(),
                    r.degree.to_string(),
                    format!("{:.6}", r.height),
                    r.orbit_len.to_string(),
                    r.status.label(),
                    r.integral_count.to_string(),
                ]);
            }
            t.warnings = table.warnings.clone();
            t.summary.insert("points".into(), table.total().into());
            t.summary.insert("max".into(), table.max.into());
            t.summary.insert("average".into(), format!("{:.6}", table.average).into());
            t.summary.insert("incomplete".into(), table.incomplete.into());
            let proxy = table
                .min_positive_canonical_height
                .map_or("none".to_string(), |h| format!("{h:.9}"));
            t.summary
                .insert("min_positive_canonical_height_observed".into(), proxy.into());
            Ok(Output::Table(t))
        }
        Command::Enum { degree, bound, s } => {
            let b = HeightBound::parse(bound)?;
            let places = parse_places(s)?;
            let pts = enum_points(*degree, &b)?;
            let mut t = Table::new(&["point_minpoly", "point_approx", "degree", "height", "s_integral"]);
            let mut integral = 0;
            for p in &pts {
                let si = is_s_integral(p, &places);
                integral += usize::from(si);
                t.push(vec![
                    p.minpoly_label(),
                    p.approx_label(),
                    p.degree().to_string(),
                    format!("{:.6}", p.height()?),
                    si.to_string(),
                ]);
            }
            t.summary.insert("total".into(), pts.len().into());
            t.summary.insert("s_integral".into(), integral.into());
            Ok(Output::Table(t))
        }
        Command::Count { degree, grid, s } => {
            let bounds = parse_bounds(grid)?;
            let places = parse_places(s)?;
            let mut records = Vec::new();
            let mut t = Table::new(&["bound", "total", "s_integral"]);
            for b in &bounds {
                let rec = count_points(*degree, b, std::slice::from_ref(&places))?;
                t.push(vec![b.to_string(), rec.total.to_string(), rec.s_integral[0].1.to_string()]);
                records.push(rec);
            }
            t.summary.insert("places".into(), places.label().into());
            if records.len() >= 2 {
                t.summary
                    .insert("total_exponent".into(), format!("{:.4}", exponent_fit(&records)?).into());
                if let Ok(e) = exponent_fit_s_integral(&records, 0) {
                    t.summary.insert("s_integral_exponent".into(), format!("{e:.4}").into());
                }
            }
            t.summary
                .insert("reference_total_exponent".into(), (degree * (degree + 1)).into());
            Ok(Output::Table(t))
        }
        Command::Poles { map, max_n } => {
            let f = dynamical_map(map)?;
            let mut t = Table::new(&["n", "degree", "distinct_poles"]);
            if f.second_iterate_is_polynomial() {
                t.warnings
                    .push(format!("the second iterate of {f} is a polynomial; pole counts stay bounded"));
            }
            for n in 1..=*max_n {
                let g = f.iterate(n)?;
                t.push(vec![n.to_string(), g.degree().to_string(), g.distinct_pole_count().to_string()]);
            }
            t.summary.insert("map".into(), f.to_string().into());
            Ok(Output::Table(t))
        }
        Command::Sieve {
            beta_minpoly,
            beta_root,
            degree,
            primes,
            bound,
            t,
        } => {
            let beta = pick_beta(beta_minpoly, *beta_root)?;
            let places = parse_places(t)?;
            let ctx = SieveContext::new(beta.clone(), places.clone(), *primes)?;
            let pol = pol_plus_size(*degree, *bound);
            let mut tab = Table::new(&[
                "k",
                "prime",
                "root",
                "single_prime_exact",
                "single_prime_main_term",
                "remaining_exact",
                "remaining_fraction",
                "euler_product",
                "euler_product_exact",
            ]);
            for k in 0..=ctx.primes().len() {
                let (prime, root, single) = if k == 0 {
                    ("-".to_string(), "-".to_string(), count_f_m(&ctx, *degree, *bound, &[])?)
                } else {
                    let e = ctx.primes()[k - 1];
                    (e.0.to_string(), e.1.to_string(), count_f_m(&ctx, *degree, *bound, &[e])?)
                };
                let g = count_g_k(&ctx, *degree, *bound, k)?;
                let ep = euler_product(&ctx, k)?;
                let frac = g as f64 / pol.to_f64().unwrap_or(f64::NAN);
                tab.push(vec![
                    k.to_string(),
                    prime,
                    root,
                    single.0.to_string(),
                    format!("{:.3}", single.1),
                    g.to_string(),
                    format!("{frac:.6}"),
                    format!("{:.6}", ep.to_f64().unwrap_or(f64::NAN)),
                    ep.to_string(),
                ]);
            }
            tab.summary.insert("beta".into(), beta.to_string().into());
            tab.summary.insert("places".into(), places.label().into());
            tab.summary.insert("box_size".into(), pol.to_string().into());
            Ok(Output::Table(tab))
        }
        Command::Density {
            beta_minpoly,
            beta_root,
            degree,
            grid,
            t,
            primes,
        } => {
            let beta = pick_beta(beta_minpoly, *beta_root)?;
            let places = parse_places(t)?;
            let bounds = parse_bounds(grid)?;
            let ctx = SieveContext::new(beta.clone(), places.clone(), *primes)?;
            let rows = density_experiment(&ctx, *degree, &bounds)?;
            let mut tab = Table::new(&["bound", "total", "hits", "ratio"]);
            for r in &rows {
                tab.push(vec![
                    r.bound.to_string(),
                    r.total.to_string(),
                    r.hits.to_string(),
                    format!("{:.8}", r.ratio),
                ]);
            }
            if let Some(last) = rows.last() {
                for h in &last.hit_points {
                    let members: Vec<String> = h.sieve_memberships.iter().map(u64::to_string).collect();
                    tab.notes.push(format!(
                        "hit at bound {}: {} irreducible_over_beta={} sieve_memberships=[{}]",
                        last.bound,
                        h.point,
                        h.irreducible_over_beta,
                        members.join(";")
                    ));
                }
            }
            let in_sieve = |generic_only: bool| -> usize {
                rows.iter()
                    .flat_map(|r| &r.hit_points)
                    .filter(|h| !h.sieve_memberships.is_empty() && (!generic_only || h.irreducible_over_beta))
                    .count()
            };
            tab.summary.insert("beta".into(), beta.to_string().into());
            tab.summary.insert("places".into(), places.label().into());
            let plist: Vec<String> = ctx.primes().iter().map(|e| e.0.to_string()).collect();
            tab.summary.insert("sieve_primes".into(), plist.join(";").into());
            tab.summary.insert("hits_in_sieve_sets".into(), in_sieve(false).into());
            tab.summary
                .insert("hits_in_sieve_sets_irreducible_over_beta".into(), in_sieve(true).into());
            Ok(Output::Table(tab))
        }
    }
}

fn default_format(cmd: &Command) -> Format {
    match cmd {
        Command::Height { .. } | Command::Canheight { .. } | Command::Orbit { .. } => Format::Json,
        _ => Format::Csv,
    }
}

fn config_json(cli: &Cli) -> Value {
    let mut v = serde_json::to_value(cli).unwrap_or(Value::Null);
    if let Value::Object(m) = &mut v {
        m.insert("precision_cap".into(), orbitint::precision_cap().into());
        m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        m.remove("output");
    }
    v
}

fn run_cli(cli: &Cli) -> CResult<()> {
    if let Ok(v) = std::env::var(PRECISION_ENV) {
        let bits: u32 = v
            .trim()
            .parse()
            .map_err(|_| CliError::input(format!("{PRECISION_ENV}={v:?} is not a bit count")))?;
        orbitint::set_precision_cap(bits);
    }
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::input("--threads must be positive"));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = execute(&cli.command)?;
    let format = cli.format.unwrap_or_else(|| default_format(&cli.command));
    let config = config_json(cli);
    let mut buf = Vec::new();
    render(&out, &config, format, &mut buf)?;
    match &cli.output {
        Some(path) => std::fs::write(path, &buf)?,
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(())
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let err = CliError {
                kind: "usage",
                message: e.to_string().trim().to_string(),
                code: 1,
            };
            eprintln!("{}", err.to_json());
            return err.code;
        }
    };
    match run_cli(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.code
        }
    }
}
