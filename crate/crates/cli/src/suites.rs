//! Invariant suites run by `cyclespin verify`.
//!
//! Every check is independent: a failing or panicking check is recorded
//! and the remaining checks still run. Reports contain no timings, so two
//! runs with the same seed produce identical bytes.

use std::panic::{catch_unwind, AssertUnwindSafe};

use cyclespin::characters::CharacterTable;
use cyclespin::colouring::{colouring_identity_gap, ClassFunction};
use cyclespin::mc::{self, CycleStats, McConfig};
use cyclespin::partitions::{dimension, enumerate_partitions};
use cyclespin::quantum::{swap_poly_coefficients, trace_exp, verify_swap_poly, Spin};
use cyclespin::variational::{
    beta_critical, big_r_convexity, convexity_check, dominance_neighbor, dominance_vertices, g,
    linspace, scan_beta_critical, z, z_derivatives, SimplexPoint,
};
use cyclespin::{characters, BigCount, Partition};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::oracle;
use crate::output::Record;

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub suite: String,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(suite: &str, check: &str, passed: bool, detail: String) -> Self {
        Check {
            suite: suite.into(),
            check: check.into(),
            passed,
            detail,
        }
    }
}

impl Record for Check {
    fn header() -> &'static [&'static str] {
        &["suite", "check", "status", "detail"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.suite.clone(),
            self.check.clone(),
            status(self.passed).into(),
            self.detail.clone(),
        ]
    }
}

pub fn status(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Deliberate corruptions used to confirm that the suites notice them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// `K_{(3,1),(2,2)}` in the `n = 4` table is raised from 1 to 2.
    Kostka,
}

impl std::str::FromStr for Fault {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s {
            "kostka" => Ok(Fault::Kostka),
            _ => anyhow::bail!("unknown fault {s:?}; the only fault is kostka"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 2024,
            fault: None,
        }
    }
}

type CheckFn = fn(&VerifyOptions) -> (bool, String);

const CHECKS: &[(&str, &str, CheckFn)] = &[
    ("characters", "kostka-vs-tableaux", kostka_vs_tableaux),
    ("characters", "kostka-column-sums", kostka_column_sums),
    ("characters", "hook-length", hook_length),
    ("characters", "sum-of-squared-dimensions", sum_of_squares),
    ("characters", "two-colour-kostka-unit", two_colour_unit),
    ("colouring", "rational-identity", colouring_rational),
    ("quantum", "trace-vs-characters", trace_vs_characters),
    ("quantum", "two-site-closed-form", two_site),
    ("swap-poly", "exact-low-spin", swap_poly_exact),
    ("swap-poly", "matrix-deviation", swap_poly_deviation),
    ("monte-carlo", "z-within-3-se", mc_within_three_se),
    ("monte-carlo", "rerun-bit-identical", mc_rerun),
    ("monte-carlo", "s3-cycle-law", mc_s3_law),
    ("monte-carlo", "subcritical-tail", mc_tail),
    ("variational", "critical-scan", critical_scan),
    ("variational", "transition-order", transition_order),
    (
        "variational",
        "free-energy-convergence",
        free_energy_convergence,
    ),
    ("variational", "g-vs-grid-oracle", g_vs_grid),
    ("convexity", "entropy-ratio", entropy_ratio),
    ("convexity", "threshold-curve", threshold_curve),
    (
        "dominance",
        "neighbour-construction",
        neighbour_construction,
    ),
];

/// Names of all checks as `(suite, check)`.
pub fn check_names() -> Vec<(&'static str, &'static str)> {
    CHECKS.iter().map(|(s, c, _)| (*s, *c)).collect()
}

fn guarded(suite: &str, name: &str, f: CheckFn, opts: &VerifyOptions) -> Check {
    match catch_unwind(AssertUnwindSafe(|| f(opts))) {
        Ok((passed, detail)) => Check::new(suite, name, passed, detail),
        Err(e) => {
            let msg = e
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| e.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            Check::new(suite, name, false, format!("panicked: {msg}"))
        }
    }
}

/// Runs one named check.
pub fn run_check(suite: &str, name: &str, opts: &VerifyOptions) -> Option<Check> {
    CHECKS
        .iter()
        .find(|(s, c, _)| *s == suite && *c == name)
        .map(|(s, c, f)| guarded(s, c, *f, opts))
}

/// Runs every check; results come back in the fixed table order.
pub fn run_all(opts: &VerifyOptions) -> Vec<Check> {
    CHECKS
        .par_iter()
        .map(|(s, c, f)| guarded(s, c, *f, opts))
        .collect()
}

/// Aligned text matrix followed by a summary line.
pub fn render_text(checks: &[Check]) -> String {
    let sw = checks
        .iter()
        .map(|c| c.suite.len())
        .max()
        .unwrap_or(5)
        .max(5);
    let cw = checks
        .iter()
        .map(|c| c.check.len())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut out = format!("{:sw$}  {:cw$}  status  detail\n", "suite", "check");
    for c in checks {
        out.push_str(&format!(
            "{:sw$}  {:cw$}  {:6}  {}\n",
            c.suite,
            c.check,
            status(c.passed),
            c.detail
        ));
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    out.push_str(&format!(
        "summary: {} passed, {} failed\n",
        checks.len() - failed,
        failed
    ));
    out
}

/// Character tables for `n <= 8` holding every partition of `n`, with
/// the requested fault applied.
fn full_tables(fault: Option<Fault>) -> Vec<CharacterTable> {
    (1..=8)
        .map(|n| {
            let mut t = CharacterTable::new(n, n.max(2)).unwrap();
            if n == 4 && fault == Some(Fault::Kostka) {
                let lambda = t.index_of(&Partition::padded(&[2, 2], 4).unwrap()).unwrap();
                let mu = t.index_of(&Partition::padded(&[3, 1], 4).unwrap()).unwrap();
                t.override_kostka(lambda, mu, BigUint::from(2u32));
            }
            t
        })
        .collect()
}

fn table_kostka(t: &CharacterTable, lambda: usize, mu: usize) -> BigUint {
    t.kostka_entries(lambda)
        .iter()
        .find(|e| e.mu == mu)
        .map(|e| e.value.exact().clone())
        .unwrap_or_default()
}

fn kostka_vs_tableaux(opts: &VerifyOptions) -> (bool, String) {
    let mut pairs = 0;
    let mut bad = Vec::new();
    for t in full_tables(opts.fault) {
        let parts = t.partitions();
        for (l, lambda) in parts.iter().enumerate() {
            for (m, mu) in parts.iter().enumerate() {
                pairs += 1;
                let want = oracle::ssyt_count(mu.parts(), lambda.parts());
                if table_kostka(&t, l, m) != BigUint::from(want) {
                    bad.push(format!("K[{mu},{lambda}]"));
                }
            }
        }
    }
    (
        bad.is_empty(),
        format!("pairs={pairs} mismatches={} {}", bad.len(), bad.join(" "))
            .trim_end()
            .into(),
    )
}

fn kostka_column_sums(opts: &VerifyOptions) -> (bool, String) {
    let mut bad = Vec::new();
    let mut count = 0;
    for t in full_tables(opts.fault) {
        for (l, lambda) in t.partitions().iter().enumerate() {
            count += 1;
            let sum: BigUint = t
                .kostka_entries(l)
                .iter()
                .map(|e| t.dimension(e.mu).exact() * e.value.exact())
                .sum();
            if sum != *cyclespin::partitions::multinomial(lambda).exact() {
                bad.push(lambda.to_string());
            }
        }
    }
    (
        bad.is_empty(),
        format!("columns={count} mismatches={} {}", bad.len(), bad.join(" "))
            .trim_end()
            .into(),
    )
}

fn hook_length(_: &VerifyOptions) -> (bool, String) {
    let mut count = 0;
    let mut bad = 0;
    for n in 1..=12 {
        for mu in enumerate_partitions(n, n.max(2)).unwrap() {
            count += 1;
            if dimension(&mu).exact() != &oracle::hook_length_dimension(mu.parts()) {
                bad += 1;
            }
        }
    }
    (bad == 0, format!("shapes={count} mismatches={bad}"))
}

fn sum_of_squares(_: &VerifyOptions) -> (bool, String) {
    let mut bad = Vec::new();
    for n in 1..=8 {
        let sum: BigUint = enumerate_partitions(n, n.max(2))
            .unwrap()
            .iter()
            .map(|mu| {
                let d = dimension(mu).into_exact();
                &d * &d
            })
            .sum();
        if sum != cyclespin::count::factorial(n) {
            bad.push(n.to_string());
        }
    }
    (
        bad.is_empty(),
        format!("n=1..8 failing=[{}]", bad.join(",")),
    )
}

fn two_colour_unit(_: &VerifyOptions) -> (bool, String) {
    let mut entries = 0;
    let mut bad = 0;
    for n in 1..=12 {
        let t = CharacterTable::new(n, 2).unwrap();
        for l in 0..t.partitions().len() {
            for e in t.kostka_entries(l) {
                entries += 1;
                if e.value != BigCount::one() {
                    bad += 1;
                }
            }
        }
    }
    (bad == 0, format!("entries={entries} not-one={bad}"))
}

fn ratio(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.random_range(lo..=hi)), BigInt::from(den))
}

fn colouring_rational(opts: &VerifyOptions) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xc010);
    let mut worst = 0.0f64;
    let mut errors = 0;
    for _ in 0..100 {
        let n = rng.random_range(1..=6usize);
        let theta = rng.random_range(2..=4usize);
        let raw: Vec<i64> = (0..theta).map(|_| rng.random_range(1..=20)).collect();
        let total: i64 = raw.iter().sum();
        let p: Vec<BigRational> = raw
            .iter()
            .map(|&a| BigRational::new(BigInt::from(a), BigInt::from(total)))
            .collect();
        let f = ClassFunction::from_fn(n, |_| ratio(&mut rng, -10, 10, 7)).unwrap();
        match colouring_identity_gap(n, theta, &p, &f) {
            Ok(gap) => worst = worst.max(gap),
            Err(_) => errors += 1,
        }
    }
    (
        errors == 0 && worst <= 1e-12,
        format!("draws=100 max_gap={worst:.3e} errors={errors}"),
    )
}

/// The `(theta, n)` pairs and inverse temperatures of the cross-engine check.
pub const CROSS_ENGINE_BETAS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

pub fn cross_engine_cases() -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = (2..=6).map(|n| (2, n)).collect();
    v.extend((2..=5).map(|n| (3, n)));
    v
}

fn trace_vs_characters(_: &VerifyOptions) -> (bool, String) {
    let worst = cross_engine_cases()
        .par_iter()
        .map(|&(theta, n)| {
            let table = CharacterTable::new(n, theta).unwrap();
            CROSS_ENGINE_BETAS
                .iter()
                .map(|&b| trace_exp(n, theta, b).unwrap().rel_diff(table.log_z(b)))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    (worst <= 1e-10, format!("cases=36 max_rel_diff={worst:.3e}"))
}

fn two_site(_: &VerifyOptions) -> (bool, String) {
    let mut worst = 0.0f64;
    for theta in 2..=6usize {
        for beta in [0.5, 1.0, 2.0] {
            let t = theta as f64;
            let want = t * (t + 1.0) / 2.0 + t * (t - 1.0) / 2.0 * f64::exp(-beta);
            let got = characters::z_exact(2, theta, beta).unwrap().value();
            worst = worst.max((got - want).abs() / want);
        }
    }
    (worst <= 1e-12, format!("cases=15 max_rel_diff={worst:.3e}"))
}

fn swap_poly_exact(_: &VerifyOptions) -> (bool, String) {
    let render = |twice: u32| -> String {
        swap_poly_coefficients(Spin::from_twice(twice))
            .map(|c| {
                c.coeffs
                    .iter()
                    .map(|q| q.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .unwrap_or_else(|e| e.to_string())
    };
    let (half, one) = (render(1), render(2));
    (
        half == "1/2, 2" && one == "-1, 1, 1",
        format!("S=1/2: [{half}] S=1: [{one}]"),
    )
}

fn swap_poly_deviation(_: &VerifyOptions) -> (bool, String) {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for twice in 3..=6 {
        let spin = Spin::from_twice(twice);
        let dev = verify_swap_poly(spin).unwrap_or(f64::INFINITY);
        worst = worst.max(dev);
        parts.push(format!("S={spin}:{dev:.1e}"));
    }
    (worst <= 1e-9, parts.join(" "))
}

/// Seed of the `n = 6` consistency run.
pub fn mc_seed(opts: &VerifyOptions) -> u64 {
    opts.seed.wrapping_add(6)
}

fn mc_within_three_se(opts: &VerifyOptions) -> (bool, String) {
    let cfg = McConfig::new(6, 2.0, 1.0, 100_000, mc_seed(opts));
    let est = parallel_z(&cfg);
    let exact = characters::z_exact(6, 2, 1.0).unwrap().value();
    let dev = (est.mean - exact).abs() / est.std_error;
    (
        dev <= 3.0,
        format!(
            "estimate={:.6} se={:.2e} exact={exact:.6} deviation={dev:.2}se",
            est.mean, est.std_error
        ),
    )
}

/// `E[theta^ell]` with chunks drawn in parallel and reduced in index order.
pub fn parallel_z(cfg: &McConfig) -> mc::Estimate {
    let rate = cfg.proposal_rate.unwrap_or(1.0);
    let draws: Vec<mc::Draw> = (0..cfg.chunk_count())
        .into_par_iter()
        .map(|c| mc::draws_for_chunk(cfg, rate, c, None))
        .collect::<Vec<_>>()
        .concat();
    mc::reduce_z(&draws, cfg.theta)
}

fn mc_rerun(opts: &VerifyOptions) -> (bool, String) {
    let cfg = McConfig::new(6, 2.0, 1.0, 100_000, mc_seed(opts));
    let a = parallel_z(&cfg);
    let b = mc::estimate_z(&cfg).unwrap();
    let same =
        a.mean.to_bits() == b.mean.to_bits() && a.std_error.to_bits() == b.std_error.to_bits();
    (
        same,
        format!(
            "parallel={:016x} serial={:016x}",
            a.mean.to_bits(),
            b.mean.to_bits()
        ),
    )
}

fn mc_s3_law(opts: &VerifyOptions) -> (bool, String) {
    let beta = 2.0;
    let cfg = McConfig::new(3, 1.0, beta, 100_000, opts.seed.wrapping_add(3));
    let mut counts = [0usize; 3];
    for chunk in 0..cfg.chunk_count() {
        mc::for_each_sample(&cfg, 1.0, chunk, |_, sigma| {
            counts[3 - CycleStats::of(sigma).ell()] += 1;
        });
    }
    let law = oracle::s3_cycle_type_law(beta);
    let total = cfg.samples as f64;
    let z: Vec<f64> = (0..3)
        .map(|i| {
            (counts[i] as f64 - total * law[i]).abs() / (total * law[i] * (1.0 - law[i])).sqrt()
        })
        .collect();
    (
        z.iter().all(|&v| v <= 4.0),
        format!("sigmas=[{:.2}, {:.2}, {:.2}]", z[0], z[1], z[2]),
    )
}

fn mc_tail(opts: &VerifyOptions) -> (bool, String) {
    let cfg = McConfig::new(400, 2.0, 1.0, 100_000, opts.seed.wrapping_add(400));
    let rate = mc::default_tail_rate(cfg.theta);
    let draws: Vec<mc::Draw> = (0..cfg.chunk_count())
        .into_par_iter()
        .map(|c| mc::draws_for_chunk(&cfg, rate, c, Some(20)))
        .collect::<Vec<_>>()
        .concat();
    let t = mc::reduce_tail(&draws, cfg.theta, 0.5);
    (
        t.estimate <= 0.01 && t.ess >= 100.0,
        format!(
            "estimate={:.3e} se={:.1e} ess={:.0}",
            t.estimate, t.std_error, t.ess
        ),
    )
}

fn critical_scan(_: &VerifyOptions) -> (bool, String) {
    let diffs: Vec<f64> = (2..=5usize)
        .into_par_iter()
        .map(|theta| (beta_critical(theta).unwrap() - scan_beta_critical(theta).unwrap()).abs())
        .collect();
    let b3 = beta_critical(3).unwrap();
    let ok = diffs.iter().all(|&d| d <= 1e-6)
        && beta_critical(2).unwrap() == 2.0
        && (b3 - 4.0 * 2f64.ln()).abs() <= 1e-12;
    let worst = diffs.iter().cloned().fold(0.0, f64::max);
    (ok, format!("theta=2..5 max_diff={worst:.1e}"))
}

fn transition_order(_: &VerifyOptions) -> (bool, String) {
    let z3 = z_derivatives(beta_critical(3).unwrap(), 3).0;
    let z2 = z_derivatives(2.0, 2).0;
    let z2p = z_derivatives(2.0 + 1e-4, 2).0;
    let ok = (z3 - 1.0 / 3.0).abs() <= 1e-6 && z2.abs() <= 1e-9 && z2p <= 0.02;
    (
        ok,
        format!("theta3={z3:.10} theta2={z2:.1e} theta2_above={z2p:.4}"),
    )
}

fn free_energy_convergence(_: &VerifyOptions) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for beta in [1.0, 3.0] {
        let limit = z(beta, 0.0, 2);
        let gaps: Vec<f64> = [50, 100, 200]
            .par_iter()
            .map(|&n| (characters::free_energy_density(n, 2, beta, 0.0).unwrap() - limit).abs())
            .collect();
        ok &= gaps[2] <= 0.05 && gaps[0] > gaps[1] && gaps[1] > gaps[2];
        parts.push(format!(
            "beta={beta}: [{:.4}, {:.4}, {:.4}]",
            gaps[0], gaps[1], gaps[2]
        ));
    }
    (ok, parts.join(" "))
}

/// Test points on the `1/120` grid, as integer vectors summing to 120.
pub fn grid_test_points() -> Vec<Vec<usize>> {
    vec![
        vec![60, 60],
        vec![80, 40],
        vec![100, 20],
        vec![40, 40, 40],
        vec![60, 40, 20],
        vec![90, 20, 10],
        vec![50, 50, 20],
        vec![30, 30, 30, 30],
        vec![60, 30, 20, 10],
        vec![45, 45, 15, 15],
        vec![90, 10, 10, 10],
    ]
}

pub const GRID_BETAS: [f64; 4] = [1.0, 3.0, 4.5, 6.0];

/// Comparison of `g` with the grid oracle at one test point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridGap {
    /// `g(x) - grid max`; never below zero up to rounding.
    pub gap: f64,
    /// Twice the mesh-induced tolerance.
    pub tol: f64,
    /// The grid argmax keeps every coordinate at least two mesh steps
    /// from zero, so the grid can resolve the maximizer.
    pub resolved: bool,
}

pub fn g_grid_gap(units: &[usize], beta: f64) -> GridGap {
    let m: usize = units.iter().sum();
    let x = SimplexPoint::new(units.iter().map(|&u| u as f64 / m as f64).collect()).unwrap();
    let grid = oracle::grid_g(units, m, beta);
    GridGap {
        gap: g(&x, beta) - grid.value,
        tol: 2.0 * grid.mesh_tol,
        resolved: grid.argmax.iter().all(|&u| u >= 2),
    }
}

fn g_vs_grid(_: &VerifyOptions) -> (bool, String) {
    let cases: Vec<(Vec<usize>, f64)> = grid_test_points()
        .into_iter()
        .flat_map(|p| GRID_BETAS.iter().map(move |&b| (p.clone(), b)))
        .collect();
    let gaps: Vec<GridGap> = cases.par_iter().map(|(p, b)| g_grid_gap(p, *b)).collect();
    let below = gaps.iter().map(|g| g.gap).fold(0.0, f64::min);
    let resolved: Vec<&GridGap> = gaps.iter().filter(|g| g.resolved).collect();
    let excess = resolved
        .iter()
        .map(|g| g.gap - g.tol)
        .fold(f64::NEG_INFINITY, f64::max);
    (
        below >= -1e-9 && excess <= 0.0,
        format!(
            "cases={} resolved={} min_gap={below:.1e} max_gap_minus_tol={excess:.1e}",
            cases.len(),
            resolved.len()
        ),
    )
}

fn entropy_ratio(_: &VerifyOptions) -> (bool, String) {
    let grid = linspace(0.01, 0.99, 10_000);
    let mut ok = true;
    let mut worst = 0.0f64;
    for (p, q) in [(2.0, 2.0), (3.0, 1.5), (4.0, 4.0 / 3.0), (1.25, 5.0)] {
        match convexity_check(p, q, &grid) {
            Ok(r) => {
                ok &= r.passes(1e-8);
                worst = worst.max(r.max_violation / r.scale);
            }
            Err(_) => ok = false,
        }
    }
    (ok, format!("pairs=4 max_violation={worst:.1e}"))
}

fn threshold_curve(_: &VerifyOptions) -> (bool, String) {
    match big_r_convexity(1, 4, &linspace(0.26, 0.99, 10_000)) {
        Ok(r) => (
            r.passes(1e-8),
            format!(
                "theta=4 r=1 max_violation={:.1e}",
                r.max_violation / r.scale
            ),
        ),
        Err(e) => (false, e.to_string()),
    }
}

fn random_point(rng: &mut ChaCha8Rng, theta: usize) -> SimplexPoint {
    let e: Vec<f64> = (0..theta)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let s: f64 = e.iter().sum();
    SimplexPoint::from_unsorted(e.iter().map(|v| v / s).collect()).unwrap()
}

fn perturb(rng: &mut ChaCha8Rng, x: &SimplexPoint, eps: f64) -> SimplexPoint {
    loop {
        let noise: Vec<f64> = x
            .coords()
            .iter()
            .map(|_| (rng.random::<f64>() - 0.5) * eps)
            .collect();
        let mean = noise.iter().sum::<f64>() / noise.len() as f64;
        let c: Vec<f64> = x
            .coords()
            .iter()
            .zip(&noise)
            .map(|(a, n)| a + n - mean)
            .collect();
        if c.iter().all(|&v| v >= 0.0) {
            let y = SimplexPoint::from_unsorted(c).unwrap();
            if y.distance(x) <= eps {
                return y;
            }
        }
    }
}

fn neighbour_construction(opts: &VerifyOptions) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xb0b);
    let mut failures = 0;
    for _ in 0..10_000 {
        let theta = rng.random_range(2..=5usize);
        let eps = rng.random::<f64>() * 0.999 / (theta * theta) as f64;
        let x = random_point(&mut rng, theta);
        let y = perturb(&mut rng, &x, eps);
        let vertices = dominance_vertices(x.coords());
        let w: Vec<f64> = vertices.iter().map(|_| rng.random::<f64>()).collect();
        let s: f64 = w.iter().sum();
        let mut zc = vec![0.0; theta];
        for (v, wi) in vertices.iter().zip(&w) {
            for (a, b) in zc.iter_mut().zip(v) {
                *a += wi / s * b;
            }
        }
        let Ok(z) = SimplexPoint::new(zc) else {
            failures += 1;
            continue;
        };
        let ok = match dominance_neighbor(&z, &y, eps) {
            Ok(zn) => {
                z.dominates(&x)
                    && zn.dominates(&y)
                    && z.distance(&zn) <= (theta - 1) as f64 * eps.sqrt() + 1e-12
            }
            Err(_) => false,
        };
        failures += usize::from(!ok);
    }
    (failures == 0, format!("trials=10000 failures={failures}"))
}
