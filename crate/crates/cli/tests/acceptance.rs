//! Acceptance criteria, one pass/fail line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cyclespin_cli::suites::{run_check, Check, VerifyOptions};

struct Criterion {
    id: &'static str,
    title: &'static str,
    checks: &'static [(&'static str, &'static str)],
    limit: Option<Duration>,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: "AC1",
        title: "cross-engine exactness",
        checks: &[("quantum", "trace-vs-characters")],
        limit: Some(Duration::from_secs(60)),
    },
    Criterion {
        id: "AC2",
        title: "two-site closed form",
        checks: &[("quantum", "two-site-closed-form")],
        limit: None,
    },
    Criterion {
        id: "AC3",
        title: "swap polynomial",
        checks: &[
            ("swap-poly", "exact-low-spin"),
            ("swap-poly", "matrix-deviation"),
        ],
        limit: Some(Duration::from_secs(10)),
    },
    Criterion {
        id: "AC4",
        title: "Monte Carlo consistency",
        checks: &[
            ("monte-carlo", "z-within-3-se"),
            ("monte-carlo", "rerun-bit-identical"),
            ("monte-carlo", "s3-cycle-law"),
        ],
        limit: None,
    },
    Criterion {
        id: "AC5",
        title: "free-energy convergence",
        checks: &[("variational", "free-energy-convergence")],
        limit: Some(Duration::from_secs(300)),
    },
    Criterion {
        id: "AC6",
        title: "critical temperature",
        checks: &[("variational", "critical-scan")],
        limit: None,
    },
    Criterion {
        id: "AC7",
        title: "transition order",
        checks: &[("variational", "transition-order")],
        limit: None,
    },
    Criterion {
        id: "AC8",
        title: "property suites",
        checks: &[
            ("colouring", "rational-identity"),
            ("characters", "kostka-vs-tableaux"),
            ("characters", "hook-length"),
            ("characters", "sum-of-squared-dimensions"),
            ("dominance", "neighbour-construction"),
            ("convexity", "entropy-ratio"),
            ("convexity", "threshold-curve"),
        ],
        limit: None,
    },
    Criterion {
        id: "AC9",
        title: "subcritical tail",
        checks: &[("monte-carlo", "subcritical-tail")],
        limit: None,
    },
];

fn main() -> ExitCode {
    let opts = VerifyOptions::default();
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let results: Vec<Check> = c
            .checks
            .iter()
            .map(|(s, n)| run_check(s, n, &opts).expect("check is registered"))
            .collect();
        let elapsed = start.elapsed();
        let in_time = c.limit.is_none_or(|l| elapsed <= l);
        let passed = in_time && results.iter().all(|r| r.passed);
        failed += usize::from(!passed);
        let detail: Vec<String> = results
            .iter()
            .map(|r| format!("{}: {}", r.check, r.detail))
            .collect();
        let limit = c
            .limit
            .map(|l| format!(" (limit {} s)", l.as_secs()))
            .unwrap_or_default();
        println!(
            "{} {} {} [{:.1} s{}] {}",
            c.id,
            if passed { "PASS" } else { "FAIL" },
            c.title,
            elapsed.as_secs_f64(),
            limit,
            detail.join("; ")
        );
    }
    println!(
        "acceptance: {} passed, {} failed",
        CRITERIA.len() - failed,
        failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
