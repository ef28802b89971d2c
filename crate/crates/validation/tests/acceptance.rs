//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use orbitint::algnum::{diff, invert, is_s_integral, mahler_measure_bounds, roots_of, weil_height, AlgebraicNumber, PlaceSet, ProjPoint};
use orbitint::dynamics::{canonical_height, orbit_integral_census, RationalMap};
use orbitint::enumerate::{compare_scaled_mahler, count_points, exponent_fit, exponent_fit_s_integral, CountRecord, HeightBound};
use orbitint::sieve::{count_f_m, count_g_k, density_experiment, euler_product, SieveContext};
use orbitint::IntPoly;

type Check = std::result::Result<(bool, String), String>;

fn hb(b: u64) -> HeightBound {
    HeightBound::integer(b).unwrap()
}

fn sqrt2() -> AlgebraicNumber {
    AlgebraicNumber::nearest_root(&poly(&[-2, 0, 1]), 1.414, 0.0).unwrap()
}

fn lib<T>(r: orbitint::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn records(d: usize, grid: &[u64], sets: &[PlaceSet]) -> std::result::Result<Vec<CountRecord>, String> {
    grid.iter().map(|&b| lib(count_points(d, &hb(b), sets))).collect()
}

fn slopes() -> Check {
    let r1 = records(1, &[10, 20, 40, 80], &[])?;
    for r in &r1 {
        let b = r.bound.to_f64() as i64;
        let oracle = 1 + reduced_fractions(b).len() as u64;
        if r.total != oracle {
            return Err(format!("d=1 B={b}: count {} but {} reduced fractions", r.total, oracle));
        }
    }
    let r2 = records(2, &[2, 3, 4, 6], &[])?;
    for r in &r2 {
        let b = r.bound.to_f64() as i64;
        let oracle = quadratic_point_count(b) + 1 + reduced_fractions(b).len() as u64;
        if r.total != oracle {
            return Err(format!("d=2 B={b}: count {} but oracle {}", r.total, oracle));
        }
    }
    let s1 = lib(exponent_fit(&r1))?;
    let s2 = lib(exponent_fit(&r2))?;
    let ok = (s1 - 2.0).abs() <= 0.3 && (s2 - 6.0).abs() <= 0.6;
    Ok((ok, format!("slope d=1 {s1:.3} (2.0 +- 0.3), d=2 {s2:.3} (6.0 +- 0.6)")))
}

/// Points of exact degree 2 and height at most `b`: two per primitive
/// irreducible quadratic with Mahler measure at most `b^2`.
fn quadratic_point_count(b: i64) -> u64 {
    let t = (b * b) as f64;
    let mut n = 0;
    for a in 1..=b * b {
        for m in -2 * b * b..=2 * b * b {
            for c in -b * b..=b * b {
                let f = [c, m, a];
                if c == 0 || gcd_all(&f) != 1 || !certified_irreducible(&f) {
                    continue;
                }
                let disc = m * m - 4 * a * c;
                let mahler = if disc < 0 {
                    // |root|^2 = c/a for both conjugates
                    a.max(c) as f64
                } else {
                    let s = (disc as f64).sqrt();
                    let r1 = ((-m as f64) + s) / (2.0 * a as f64);
                    let r2 = ((-m as f64) - s) / (2.0 * a as f64);
                    a as f64 * r1.abs().max(1.0) * r2.abs().max(1.0)
                };
                // ties only occur at the integer values a and |c|
                if mahler <= t * (1.0 + 1e-12) {
                    n += 2;
                }
            }
        }
    }
    n
}

fn s_integral_exponent() -> Check {
    let grid = [10u64, 20, 40, 80];
    let with2 = PlaceSet::new([2]).unwrap();
    let recs = records(1, &grid, &[PlaceSet::archimedean(), with2.clone()])?;
    for r in &recs {
        let b = r.bound.to_f64() as i64;
        if r.s_integral[0].1 != (2 * b + 1) as u64 {
            return Err(format!("B={b}: {} integers, expected {}", r.s_integral[0].1, 2 * b + 1));
        }
        let oracle = reduced_fractions(b).iter().filter(|(_, d)| d.count_ones() == 1).count() as u64;
        if r.s_integral[1].1 != oracle {
            return Err(format!("B={b}: {} {{2}}-integers, expected {oracle}", r.s_integral[1].1));
        }
    }
    let slope = lib(exponent_fit_s_integral(&recs, 0))?;
    let ratios: Vec<f64> = recs.iter().map(|r| r.s_integral[1].1 as f64 / r.s_integral[0].1 as f64).collect();
    let growing = ratios.windows(2).all(|w| w[1] > w[0]);
    let ok = (slope - 1.0).abs() <= 0.2 && growing;
    let shown: Vec<String> = ratios.iter().map(|x| format!("{x:.3}")).collect();
    Ok((ok, format!("slope S={{inf}} {slope:.3} (1.0 +- 0.2); count ratio S={{inf,2}}/S={{inf}} over B=10..80: {}", shown.join(", "))))
}

fn inclusion_exclusion() -> Check {
    let ctx = lib(SieveContext::new(sqrt2(), PlaceSet::archimedean(), 3))?;
    let oracle_primes = split_primes_oracle(&[-2, 0, 1], 3);
    if ctx.primes() != oracle_primes.as_slice() {
        return Err(format!("sieve primes {:?}, expected {:?}", ctx.primes(), oracle_primes));
    }
    let mut cases = 0;
    for d in [1usize, 2] {
        for b in [10u64, 20, 30] {
            for k in 1..=3usize {
                let got = lib(count_g_k(&ctx, d, b, k))?;
                let brute = pol_plus(d, b as i64)
                    .filter(|c| oracle_primes[..k].iter().all(|&(p, r)| !single_prime_condition(c, p, r)))
                    .count() as i128;
                if got != brute {
                    return Ok((false, format!("d={d} B={b} k={k}: inclusion-exclusion {got}, brute force {brute}")));
                }
                cases += 1;
            }
        }
    }
    Ok((true, format!("{cases}/18 cases equal to brute-force complement counts")))
}

fn main_term() -> Check {
    let ctx = lib(SieveContext::new(sqrt2(), PlaceSet::archimedean(), 1))?;
    let (exact, main) = lib(count_f_m(&ctx, 2, 200, &[(7, 3)]))?;
    let brute = pol_plus(2, 200).filter(|c| single_prime_condition(c, 7, 3)).count() as u64;
    if exact != brute {
        return Err(format!("exact count {exact}, brute force {brute}"));
    }
    let dev = (exact as f64 / main - 1.0).abs();
    Ok((dev <= 0.2, format!("exact {exact}, main term {main:.2}, |ratio - 1| = {dev:.4} (<= 0.2)")))
}

fn exclusion_soundness() -> Check {
    let beta = sqrt2();
    let t = PlaceSet::archimedean();
    let mut checked = 0usize;
    let mut bad: Vec<String> = Vec::new();
    for c in pol_plus(2, 12) {
        if !single_prime_condition(&c, 7, 3) {
            continue;
        }
        let f = poly(&c).primitive_part();
        if !f.is_irreducible() {
            continue;
        }
        for alpha in lib(roots_of(&f))? {
            checked += 1;
            let integral = match diff(&alpha, &beta) {
                Ok(delta) if !delta.is_zero() => is_s_integral(&ProjPoint::Finite(lib(invert(&delta))?), &t),
                // alpha = beta lies on the removed point
                _ => false,
            };
            if integral {
                bad.push(format!("{} at {:.4}", poly(&c), alpha.approx().0));
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("{checked} roots, none with T-integral 1/(alpha - beta)")
    } else {
        bad.sort();
        bad.dedup();
        format!(
            "{} of {checked} roots have T-integral 1/(alpha - beta), e.g. {}",
            bad.len(),
            bad.iter().take(5).cloned().collect::<Vec<_>>().join("; ")
        )
    };
    Ok((bad.is_empty(), detail))
}

fn density_decay() -> Check {
    let ctx = lib(SieveContext::new(sqrt2(), PlaceSet::archimedean(), 5))?;
    let rows = lib(density_experiment(&ctx, 2, &[hb(3), hb(6), hb(12)]))?;
    let first = rows[0].ratio;
    let last = rows[rows.len() - 1].ratio;
    let shown: Vec<String> = rows
        .iter()
        .map(|r| format!("B={} {}/{} = {:.6}", r.bound, r.hits, r.total, r.ratio))
        .collect();
    Ok((last < first / 2.0, format!("{}; needs ratio(12) < ratio(3)/2", shown.join(", "))))
}

fn euler_decay() -> Check {
    let k = 25;
    let ctx = lib(SieveContext::new(sqrt2(), PlaceSet::archimedean(), k))?;
    let primes = split_primes_oracle(&[-2, 0, 1], k);
    let mut oracle = BigRational::one();
    let mut prev: Option<BigRational> = None;
    let mut decreasing = true;
    for (i, &(p, _)) in primes.iter().enumerate() {
        let got = lib(euler_product(&ctx, i + 1))?;
        let p = BigInt::from(p);
        oracle *= BigRational::one() - BigRational::new(&p - 1, &p * &p);
        if got != oracle {
            return Err(format!("partial product {} differs from oracle", i + 1));
        }
        if let Some(q) = &prev {
            decreasing &= got < *q;
        }
        prev = Some(got);
    }
    let last = prev.unwrap().to_f64().unwrap();
    let below = last < 0.5;
    Ok((
        decreasing && below,
        format!(
            "strictly decreasing: {decreasing}; product over first {k} split primes (7..{}) = {last:.5}, needs < 0.5",
            primes[k - 1].0
        ),
    ))
}

fn functional_equation() -> Check {
    let phi = lib(RationalMap::new(poly(&[-1, 0, 1]), poly(&[0, 1])))?;
    let tol = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let mut worst = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for _ in 0..20 {
        let (a, b) = loop {
            let a: i64 = rng.gen_range(-50..=50);
            let b: i64 = rng.gen_range(1..=50);
            if num_integer::Integer::gcd(&a, &b) == 1 {
                break (a, b);
            }
        };
        let p = ProjPoint::rational(&BigRational::new(a.into(), b.into()));
        let h0 = lib(canonical_height(&phi, &p, tol))?;
        let h1 = lib(canonical_height(&phi, &lib(phi.eval_point(&p))?, tol))?;
        worst = worst.max((h1 - 2.0 * h0).abs());
        // h(phi^n P) / 2^n by exact iteration
        let mut z = Some((BigInt::from(a), BigInt::from(b)));
        let n = 12;
        for _ in 0..n {
            z = step_z2m1_over_z(&z);
        }
        worst_oracle = worst_oracle.max((log_height_q(&z) / 2f64.powi(n) - h0).abs());
    }
    if worst_oracle > 1e-3 {
        return Err(format!("canonical height differs from the iterated height by {worst_oracle:.2e}"));
    }
    let g = lib(RationalMap::polynomial(poly(&[-1, 0, 1])))?;
    let h_zero = lib(canonical_height(&g, &ProjPoint::integer(0), tol))?;
    let ok = worst <= 3.0 * tol && h_zero.abs() <= tol;
    Ok((
        ok,
        format!(
            "max |h(phi P) - 2 h(P)| = {worst:.2e} over 20 points (<= 3e-6); h(0) under z^2-1 = {h_zero:.1e}; iteration oracle within {worst_oracle:.1e}"
        ),
    ))
}

/// Homogeneous iteration of `[X^2 - Y^2 : XY]`.
fn pole_oracle(n: usize) -> std::result::Result<usize, String> {
    let mut num = IntPoly::x();
    let mut den = IntPoly::one();
    for _ in 0..n {
        let next_num = &(&num * &num) - &(&den * &den);
        den = &num * &den;
        num = next_num;
    }
    if num.gcd_q(&den).deg() != 0 {
        return Err("iterate has a common factor".into());
    }
    let finite = den.squarefree_part().deg();
    Ok(finite + usize::from(num.deg() > den.deg()))
}

fn pole_growth() -> Check {
    let phi = lib(RationalMap::new(poly(&[-1, 0, 1]), poly(&[0, 1])))?;
    let mut counts = Vec::new();
    for n in 1..=4u32 {
        let c = lib(phi.iterate(n))?.distinct_pole_count();
        let oracle = pole_oracle(n as usize)?;
        if c != oracle {
            return Err(format!("n={n}: {c} poles, symbolic composition gives {oracle}"));
        }
        counts.push(c);
    }
    let ok = counts[0] == 2 && counts[1] == 4 && counts[2] >= 7 && counts.windows(2).all(|w| w[1] >= w[0]);
    Ok((ok, format!("pole counts n=1..4: {counts:?}")))
}

type Rational = (BigInt, BigInt);

/// Distinct integers in the first `max_iter + 1` orbit points. Under
/// `(z^2 - 1)/z` a reduced `a/b` maps to the reduced `(a^2 - b^2)/(ab)`, so
/// once a denominator exceeds 1 it never returns.
fn integral_orbit_oracle(start: Option<Rational>, max_iter: usize) -> usize {
    let mut seen: HashSet<Rational> = HashSet::new();
    let mut z = start;
    for _ in 0..=max_iter {
        match &z {
            None => break,
            Some((a, b)) if b.is_one() => {
                seen.insert((a.clone(), b.clone()));
            }
            Some(_) => break,
        }
        z = step_z2m1_over_z(&z);
    }
    seen.len()
}

fn point_key(p: &ProjPoint) -> Option<Rational> {
    let q = p.finite()?.to_rational().expect("degree one census point");
    Some((q.numer().clone(), q.denom().clone()))
}

fn census() -> Check {
    let phi = lib(RationalMap::new(poly(&[-1, 0, 1]), poly(&[0, 1])))?;
    let s = PlaceSet::archimedean();
    let small = lib(orbit_integral_census(&phi, 1, &hb(5), &s, 20))?;
    let large = lib(orbit_integral_census(&phi, 1, &hb(50), &s, 20))?;
    let again = lib(orbit_integral_census(&phi, 1, &hb(50), &s, 20))?;
    let counts = |t: &orbitint::dynamics::CensusTable| -> BTreeMap<Option<Rational>, usize> {
        t.rows.iter().map(|r| (point_key(&r.point), r.integral_count)).collect()
    };
    let reproducible = counts(&large) == counts(&again) && large.max == again.max;
    for (b, t) in [(5, &small), (50, &large)] {
        let mut oracle: BTreeMap<Option<Rational>, usize> = BTreeMap::new();
        oracle.insert(None, 0);
        for (a, d) in reduced_fractions(b) {
            let z = Some((BigInt::from(a), BigInt::from(d)));
            oracle.insert(z.clone(), integral_orbit_oracle(z, 20));
        }
        if counts(t) != oracle {
            return Err(format!("B={b}: census table differs from exact iteration"));
        }
    }
    let ok = large.max <= 5 && large.average < small.average && reproducible;
    Ok((
        ok,
        format!(
            "B=50: {} points, max {}, average {:.6}; B=5 average {:.6}; reproducible: {reproducible}",
            large.total(),
            large.max,
            large.average,
            small.average
        ),
    ))
}

fn random_certified_irreducible(deg: std::ops::RangeInclusive<usize>, h: i64) -> impl Strategy<Value = Vec<i64>> {
    deg.prop_flat_map(move |e| proptest::collection::vec(-h..=h, e + 1))
        .prop_map(|mut c| {
            let e = c.len() - 1;
            if c[e] < 0 {
                c.iter_mut().for_each(|x| *x = -*x);
            }
            c
        })
        .prop_filter("certified irreducible", |c| certified_irreducible(c))
}

fn sorted_multiset(v: Vec<(IntPoly, u32)>) -> Vec<(Vec<BigInt>, u32)> {
    let mut out: Vec<(Vec<BigInt>, u32)> = v.into_iter().map(|(f, m)| (f.coeffs().to_vec(), m)).collect();
    out.sort();
    out
}

fn inequality_one() -> std::result::Result<usize, String> {
    let mut checked = 0;
    for d in 1..=3usize {
        let binom = num_integer::binomial(d as i64, d as i64 / 2);
        for c in pol_plus(d, 20) {
            if !certified_irreducible(&c) {
                continue;
            }
            checked += 1;
            let h = naive_height(&c);
            let hf = h as f64;
            let m = mahler_f64(&c);
            let margin = 1e-9 * hf;
            let upper_ok = hf <= binom as f64 * m - margin
                || compare_scaled_mahler(&c, &BigInt::from(binom), &BigInt::from(h)) != Ok(Ordering::Less);
            let lower_ok = m / ((d + 1) as f64).sqrt() <= hf - margin || {
                // too close for doubles: certified upper bound on the measure
                let (_, hi) = lib(mahler_measure_bounds(&poly(&c)))?;
                let hi = hi.to_f64();
                hi * hi <= (d + 1) as f64 * hf * hf
            };
            if !(upper_ok && lower_ok) {
                return Err(format!("inequality fails for {}", poly(&c)));
            }
        }
    }
    Ok(checked)
}

fn property_suites() -> Check {
    let mut runner = TestRunner::new(Config {
        cases: 64,
        failure_persistence: None,
        rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha,
        rng_seed: proptest::test_runner::RngSeed::Fixed(11),
        ..Config::default()
    });
    let mut failures = Vec::new();

    let roundtrip = runner.run(
        &(random_certified_irreducible(1..=4, 10), random_certified_irreducible(1..=4, 10)),
        |(g, h)| {
            let (g, h) = (poly(&g), poly(&h));
            let fz = (&g * &h).factor_z().unwrap();
            prop_assert!(fz.content.is_one());
            let expect = if g == h { vec![(g, 2)] } else { vec![(g, 1), (h, 1)] };
            prop_assert_eq!(sorted_multiset(fz.factors), sorted_multiset(expect));
            Ok(())
        },
    );
    if let Err(e) = roundtrip {
        failures.push(format!("factor round-trip: {e}"));
    }

    let pair = proptest::collection::vec(-5i64..=5, 1..=5);
    let res_gcd = runner.run(&(pair.clone(), pair, proptest::collection::vec(-3i64..=3, 1..=3)), |(a, b, common)| {
        let (mut f, mut g) = (poly(&a), poly(&b));
        let k = poly(&common);
        if !k.is_zero() && k.deg() >= 1 {
            f = &f * &k;
            g = &g * &k;
        }
        prop_assume!(!f.is_zero() && !g.is_zero());
        prop_assert_eq!(f.resultant(&g).is_zero(), f.gcd_q(&g).deg() >= 1);
        Ok(())
    });
    if let Err(e) = res_gcd {
        failures.push(format!("resultant/gcd: {e}"));
    }

    let reciprocal = runner.run(&(random_certified_irreducible(1..=4, 10), 0usize..4), |(c, i)| {
        prop_assume!(c[0] != 0);
        let roots = roots_of(&poly(&c)).unwrap();
        let a = &roots[i % roots.len()];
        let h = weil_height(a).unwrap();
        let hr = weil_height(&invert(a).unwrap()).unwrap();
        prop_assert!((h - hr).abs() <= 1e-9 * h.max(1.0), "{} vs {}", h, hr);
        Ok(())
    });
    if let Err(e) = reciprocal {
        failures.push(format!("reciprocal height: {e}"));
    }

    let ineq = inequality_one();
    let detail = match &ineq {
        Ok(n) => format!("height-coefficient inequality on {n} irreducible polynomials"),
        Err(e) => {
            failures.push(e.clone());
            String::new()
        }
    };
    if failures.is_empty() {
        Ok((true, format!("factor round-trip, resultant/gcd, reciprocal height: 64 cases each; {detail}")))
    } else {
        Ok((false, failures.join("; ")))
    }
}

fn main() {
    let criteria: Vec<(u32, &str, u64, fn() -> Check)> = vec![
        (1, "count exponents", 300, slopes),
        (2, "S-integral exponents", 120, s_integral_exponent),
        (3, "inclusion-exclusion exactness", 60, inclusion_exclusion),
        (4, "main-term fidelity", 120, main_term),
        (5, "exclusion soundness", 180, exclusion_soundness),
        (6, "density decay", 600, density_decay),
        (7, "Euler-product decay", 10, euler_decay),
        (8, "canonical height functional equation", 60, functional_equation),
        (9, "pole growth", 60, pole_growth),
        (10, "orbit census", 600, census),
        (11, "library property suites", 300, property_suites),
    ];
    let mut failed = Vec::new();
    for (n, name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let (pass, detail) = match outcome {
            Ok((pass, detail)) => (pass && in_time, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        println!(
            "criterion {n:>2} {}: {name}: {detail} [{:.1}s of {budget}s]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if !pass {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
