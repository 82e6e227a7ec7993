use std::path::Path;
use std::process::{Command, Output};

use cyclespin::mc::McConfig;
use cyclespin::quantum::Spin;
use cyclespin_cli::commands::{
    critical_rows, exact_compare_rows, free_energy_rows, mc_report, spin_poly_rows, sweep_rows,
    ExactCompareRow, McReport, SweepRow,
};
use cyclespin_cli::output::{to_csv, to_json};
use cyclespin_cli::suites::{self, run_check, VerifyOptions};
use proptest::prelude::*;

fn cyclespin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclespin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exact_compare_examples() {
    let (rows, _) = exact_compare_rows(2, 2, &[1.0], 1000, 1).unwrap();
    let two = &rows[1];
    let closed = 3.0 + (-1.0f64).exp();
    assert!((two.trace_exp - closed).abs() / closed <= 1e-12);
    assert!((two.z_exact - closed).abs() / closed <= 1e-12);
    assert!(two.rel_diff <= 1e-12);

    let (rows, _) = exact_compare_rows(1, 3, &[0.7], 100, 1).unwrap();
    let r = &rows[0];
    for v in [r.trace_exp, r.z_exact, r.mc_estimate] {
        assert!((v - 3.0).abs() <= 1e-15, "{v}");
    }
    assert_eq!(r.mc_estimate, 3.0);

    let (rows, g_rows) = exact_compare_rows(6, 2, &[0.5, 1.0, 2.0, 4.0], 2000, 1).unwrap();
    assert_eq!(rows.len(), 24);
    assert!(rows.iter().all(|r| r.rel_diff <= 1e-10));
    // partitions of 6 into at most two parts, for each beta
    assert_eq!(g_rows.len(), 4 * 4);
}

#[test]
fn exact_compare_exit_codes() {
    let ok = cyclespin(&[
        "exact-compare",
        "--n",
        "3",
        "--theta",
        "2",
        "--samples",
        "500",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("n,beta,trace_exp,z_exact,mc_estimate,mc_stderr,rel_diff\n"));
    let guarded = cyclespin(&["exact-compare", "--n", "8", "--theta", "3"]);
    assert_eq!(guarded.status.code(), Some(2));
    let msg = String::from_utf8(guarded.stderr).unwrap();
    assert!(msg.contains("exceeds the dense limit"), "{msg}");
}

#[test]
fn critical_examples() {
    let rows = critical_rows(&[2, 3, 5]).unwrap();
    assert_eq!(rows[0].closed_form, 2.0);
    assert_eq!(rows[0].transition_order, "continuous");
    assert!((rows[1].closed_form - 4.0 * 2f64.ln()).abs() < 1e-15);
    assert_eq!(rows[1].transition_order, "discontinuous");
    assert!(rows[2].abs_diff <= 1e-6);
    assert!(critical_rows(&[1]).is_err());
}

#[test]
fn spin_poly_examples() {
    let rows = spin_poly_rows(&[
        Spin::from_twice(1),
        Spin::from_twice(2),
        Spin::from_twice(4),
    ])
    .unwrap();
    assert_eq!(rows[0].coefficients, ["1/2", "2"]);
    assert_eq!(rows[1].coefficients, ["-1", "1", "1"]);
    assert!(rows[2].deviation.unwrap() <= 1e-9);
    let out = cyclespin(&["spin-poly", "--spin", "1/2,1"]);
    assert_eq!(
        stdout(&out).lines().nth(1).unwrap(),
        "1/2,2,1/2;2,0.0000000000000000e0"
    );
}

#[test]
fn free_energy_reports_maximizers() {
    let rows = free_energy_rows(3, &[3.0], &[0.0, 0.2]).unwrap();
    assert_eq!(rows.len(), 2);
    let r = &rows[0];
    assert!((r.x_up[0] - 1.0 / 3.0 - r.z_plus).abs() < 1e-15);
    assert!(r.z_plus > 0.0 && r.z_minus < 0.0);
    assert!(rows[1].z > rows[0].z);
}

#[test]
fn sweep_rows_are_ordered() {
    let rows = sweep_rows(&[3, 2], &[1.0, 2.0], &[0.0, 0.5], Some(10)).unwrap();
    let keys: Vec<(usize, f64, f64)> = rows.iter().map(|r| (r.theta, r.beta, r.h)).collect();
    assert_eq!(keys[0], (3, 1.0, 0.0));
    assert_eq!(keys[1], (3, 1.0, 0.5));
    assert_eq!(keys[7], (2, 2.0, 0.5));
    assert!(rows.iter().all(|r| r.density_n.is_some()));
}

#[test]
fn verify_fresh_checkout_passes() {
    let out = cyclespin(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), suites::check_names().len() + 2);
    assert!(text.ends_with("failed\n"));
}

#[test]
fn injected_kostka_fault_is_flagged() {
    let out = cyclespin(&["verify", "--inject-fault", "kostka"]);
    assert_ne!(out.status.code(), Some(0));
    let text = stdout(&out);
    let failing: Vec<&str> = text.lines().filter(|l| l.contains(" FAIL ")).collect();
    assert!(!failing.is_empty());
    assert!(
        failing.iter().all(|l| l.starts_with("characters")),
        "{text}"
    );
    assert!(text.contains("K[(3,1,0,0),(2,2,0,0)]"));
    // every other suite still ran
    assert_eq!(text.lines().count(), suites::check_names().len() + 2);
    let bad = cyclespin(&["verify", "--inject-fault", "nonsense"]);
    assert_eq!(bad.status.code(), Some(2));
}

fn read(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap()
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let runs: &[&[&str]] = &[
        &["verify", "--seed", "17"],
        &[
            "exact-compare",
            "--n",
            "4",
            "--samples",
            "3000",
            "--seed",
            "5",
        ],
        &["critical", "--theta", "2,3"],
        &[
            "free-energy",
            "--spin",
            "1",
            "--beta",
            "2,3",
            "--field",
            "0,0.1",
        ],
        &[
            "mc",
            "--n",
            "8",
            "--samples",
            "5000",
            "--k",
            "3",
            "--field",
            "0.2",
        ],
        &["spin-poly"],
        &[
            "sweep",
            "--theta",
            "2,3",
            "--beta-range",
            "1:3:0.5",
            "--format",
            "json",
        ],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut outs = Vec::new();
        for rep in 0..2 {
            let path = dir.path().join(format!("{i}-{rep}.out"));
            let mut full: Vec<&str> = args.to_vec();
            let p = path.to_str().unwrap().to_string();
            full.push("--out");
            full.push(&p);
            let o = cyclespin(&full);
            assert_eq!(o.status.code(), Some(0), "{args:?}");
            outs.push(read(&path));
        }
        assert!(!outs[0].is_empty());
        assert_eq!(outs[0], outs[1], "{args:?}");
    }
}

#[test]
fn mc_report_round_trips() {
    let mut cfg = McConfig::new(12, 2.0, 1.5, 3000, 4);
    cfg.h = 0.3;
    let (report, chunks) = mc_report(&cfg, Some(4), 0.25).unwrap();
    let text = to_json(&report).unwrap();
    let back: McReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
    assert!(report.z_field.is_some() && report.tail.is_some());
    assert_eq!(chunks.iter().map(|c| c.samples).sum::<usize>(), 3000);
    let one = McConfig::new(3, 2.0, 1.0, 1, 4);
    let (single, _) = mc_report(&one, None, 0.5).unwrap();
    assert_eq!(single.z.std_error, None);
    let back: McReport = serde_json::from_str(&to_json(&single).unwrap()).unwrap();
    assert_eq!(back, single);
}

#[test]
fn mc_cli_report_and_chunks() {
    let dir = tempfile::tempdir().unwrap();
    let chunks = dir.path().join("chunks.csv");
    let out = cyclespin(&[
        "mc",
        "--n",
        "6",
        "--samples",
        "10000",
        "--seed",
        "3",
        "--chunk-csv",
        chunks.to_str().unwrap(),
        "--timing",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: McReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.config.samples, 10_000);
    assert!(report.wall_time_s.is_some());
    let csv = std::fs::read_to_string(chunks).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3);
    assert_eq!(cyclespin(&["mc", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn manifest_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# critical points\ntheta = 2,3\nformat = json\n").unwrap();
    let c = cfg.to_str().unwrap();
    let a = cyclespin(&["critical", "--config", c]);
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(rows.len(), 2);
    let b = cyclespin(&["critical", "--config", c, "--spin", "3/2"]);
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["theta"], 4);

    std::fs::write(&cfg, "theta = 2\nspin = 1/2\n").unwrap();
    assert_eq!(
        cyclespin(&["critical", "--config", c]).status.code(),
        Some(2)
    );
    assert_eq!(
        cyclespin(&["critical", "--theta", "2", "--spin", "1"])
            .status
            .code(),
        Some(2)
    );
    for bad in ["3:1:0.5", "1:3:0", "1:3"] {
        let o = cyclespin(&["sweep", "--beta-range", bad]);
        assert_eq!(o.status.code(), Some(2), "{bad}");
    }
}

#[test]
fn g_matches_grid_oracle() {
    let c = run_check("variational", "g-vs-grid-oracle", &VerifyOptions::default()).unwrap();
    assert!(c.passed, "{}", c.detail);
    for p in suites::grid_test_points() {
        for b in suites::GRID_BETAS {
            assert!(suites::g_grid_gap(&p, b).gap >= -1e-9);
        }
    }
}

#[test]
fn verify_json_round_trips() {
    let checks = suites::run_all(&VerifyOptions::default());
    let back: Vec<suites::Check> = serde_json::from_str(&to_json(&checks).unwrap()).unwrap();
    assert_eq!(back, checks);
    assert!(to_csv(&checks).starts_with("suite,check,status,detail\n"));
}

fn real() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        -1e3..1e3f64
    ]
}

proptest! {
    #[test]
    fn exact_rows_round_trip(n in 1usize..20, vals in proptest::collection::vec(real(), 6), se in proptest::option::of(real())) {
        let row = ExactCompareRow {
            n,
            beta: vals[0],
            trace_exp: vals[1],
            z_exact: vals[2],
            mc_estimate: vals[3],
            mc_stderr: se,
            rel_diff: vals[4],
        };
        let text = to_json(&vec![row.clone()]).unwrap();
        let back: Vec<ExactCompareRow> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, vec![row.clone()]);
        // CSV cells parse back to the same reals
        let csv = to_csv(std::slice::from_ref(&row));
        let cells: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        prop_assert_eq!(cells[2].parse::<f64>().unwrap(), row.trace_exp);
    }

    #[test]
    fn sweep_rows_round_trip(theta in 2usize..8, vals in proptest::collection::vec(real(), 6), d in proptest::option::of(real())) {
        let row = SweepRow {
            theta,
            beta: vals[0],
            h: vals[1],
            z: vals[2],
            z_plus: vals[3],
            z_minus: vals[4],
            density_n: d,
        };
        let back: Vec<SweepRow> = serde_json::from_str(&to_json(&vec![row.clone()]).unwrap()).unwrap();
        prop_assert_eq!(back, vec![row]);
    }
}
