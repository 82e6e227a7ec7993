//! Subcommand implementations.

use std::path::Path;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use cyclespin::characters::CharacterTable;
use cyclespin::mc::{self, McConfig};
use cyclespin::quantum::{
    swap_poly_coefficients, trace_exp, verify_swap_poly, Spin, MAX_DENSE_DIM, MAX_VERIFY_TWICE_SPIN,
};
use cyclespin::variational::{beta_critical, maximize_phi, scan_beta_critical, z, z_derivatives};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Format, RunConfig};
use crate::output::{self, finite, opt_real, real, real_list, Record};
use crate::suites::{self, Fault, VerifyOptions};

/// Relative tolerance between the two exact engines.
pub const EXACT_TOL: f64 = 1e-10;

/// Keys each subcommand reads; anything else is reported and ignored.
fn known_keys(command: &str) -> &'static [&'static str] {
    match command {
        "exact-compare" => &[
            "n",
            "theta",
            "spin",
            "beta",
            "beta-range",
            "samples",
            "seed",
            "format",
            "out",
            "g-rows",
        ],
        "critical" => &["theta", "spin", "format", "out"],
        "free-energy" => &[
            "theta",
            "spin",
            "beta",
            "beta-range",
            "field",
            "format",
            "out",
        ],
        "mc" => &[
            "n",
            "theta",
            "spin",
            "beta",
            "field",
            "samples",
            "seed",
            "k",
            "eps",
            "proposal-rate",
            "chunk-csv",
            "timing",
            "format",
            "out",
        ],
        "spin-poly" => &["spin", "theta", "format", "out"],
        "sweep" => &[
            "theta",
            "spin",
            "beta",
            "beta-range",
            "field",
            "n",
            "format",
            "out",
        ],
        "verify" => &["seed", "inject-fault", "format", "out"],
        _ => &[],
    }
}

/// Runs a subcommand and returns the process exit code.
pub fn run(cfg: &RunConfig) -> Result<i32> {
    let known = known_keys(&cfg.command);
    for key in cfg.params().keys() {
        if !known.contains(&key.as_str()) {
            log::warn!("{} ignores {key}", cfg.command);
        }
    }
    match cfg.command.as_str() {
        "exact-compare" => exact_compare(cfg),
        "critical" => critical(cfg),
        "free-energy" => free_energy(cfg),
        "mc" => run_mc(cfg),
        "spin-poly" => spin_poly(cfg),
        "sweep" => sweep(cfg),
        "verify" => verify(cfg),
        other => bail!("unknown command {other:?}"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactCompareRow {
    pub n: usize,
    pub beta: f64,
    pub trace_exp: f64,
    pub z_exact: f64,
    pub mc_estimate: f64,
    pub mc_stderr: Option<f64>,
    pub rel_diff: f64,
}

impl Record for ExactCompareRow {
    fn header() -> &'static [&'static str] {
        &[
            "n",
            "beta",
            "trace_exp",
            "z_exact",
            "mc_estimate",
            "mc_stderr",
            "rel_diff",
        ]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            real(self.beta),
            real(self.trace_exp),
            real(self.z_exact),
            real(self.mc_estimate),
            opt_real(self.mc_stderr),
            real(self.rel_diff),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GRowRecord {
    pub n: usize,
    pub theta: usize,
    pub beta: f64,
    pub lambda: String,
    pub ln_g: f64,
    /// Exact integer, as a decimal string.
    pub rearrangements: String,
}

impl Record for GRowRecord {
    fn header() -> &'static [&'static str] {
        &["n", "theta", "beta", "lambda", "ln_g", "rearrangements"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.theta.to_string(),
            real(self.beta),
            self.lambda.clone(),
            real(self.ln_g),
            self.rearrangements.clone(),
        ]
    }
}

/// Rows for `n = 1..=n_max` and every `beta`, plus per-`lambda` rows at `n_max`.
pub fn exact_compare_rows(
    n_max: usize,
    theta: usize,
    betas: &[f64],
    samples: usize,
    seed: u64,
) -> Result<(Vec<ExactCompareRow>, Vec<GRowRecord>)> {
    ensure!(n_max >= 1, "n must be at least 1");
    ensure!(theta >= 2, "exact-compare needs theta >= 2");
    let dim = (theta as f64).powi(n_max as i32);
    if dim > MAX_DENSE_DIM as f64 {
        bail!(
            "theta^n = {theta}^{n_max} exceeds the dense limit {MAX_DENSE_DIM}; lower n or theta"
        );
    }
    let tables: Vec<CharacterTable> = (1..=n_max)
        .map(|n| CharacterTable::new(n, theta))
        .collect::<Result<_, _>>()?;
    let jobs: Vec<(usize, usize, f64)> = (1..=n_max)
        .flat_map(|n| betas.iter().map(move |&b| (n, b)))
        .enumerate()
        .map(|(i, (n, b))| (i, n, b))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(i, n, beta)| -> Result<ExactCompareRow> {
            let tr = trace_exp(n, theta, beta)?;
            let ze = tables[n - 1].log_z(beta);
            let mc_cfg = McConfig::new(n, theta as f64, beta, samples, seed.wrapping_add(i as u64));
            mc_cfg.validate()?;
            let est = suites::parallel_z(&mc_cfg);
            Ok(ExactCompareRow {
                n,
                beta,
                trace_exp: tr.value(),
                z_exact: ze.value(),
                mc_estimate: est.mean,
                mc_stderr: finite(est.std_error),
                rel_diff: tr.rel_diff(ze),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let last = &tables[n_max - 1];
    let g_rows = betas
        .iter()
        .flat_map(|&beta| {
            last.g_rows(beta).into_iter().map(move |r| GRowRecord {
                n: n_max,
                theta,
                beta,
                lambda: r.lambda.to_string(),
                ln_g: r.ln_g,
                rearrangements: r.rearrangements.exact().to_string(),
            })
        })
        .collect();
    Ok((rows, g_rows))
}

fn exact_compare(cfg: &RunConfig) -> Result<i32> {
    let n_max = cfg.usize("n")?.unwrap_or(6);
    let theta = cfg.theta(2)?;
    let betas = cfg.betas()?.unwrap_or_else(|| vec![0.5, 1.0, 2.0, 4.0]);
    let samples = cfg.usize("samples")?.unwrap_or(100_000);
    let seed = cfg.u64("seed")?.unwrap_or(1);
    let (rows, g_rows) = exact_compare_rows(n_max, theta, &betas, samples, seed)?;
    let format = cfg.format(Format::Csv)?;
    output::emit(&rows, format, cfg.path("out").as_deref())?;
    if let Some(p) = cfg.path("g-rows") {
        output::emit(&g_rows, Format::Csv, Some(&p))?;
    }
    let worst = rows.iter().map(|r| r.rel_diff).fold(0.0, f64::max);
    if worst > EXACT_TOL {
        log::error!("exact engines disagree: max rel_diff {worst:e} > {EXACT_TOL:e}");
        return Ok(1);
    }
    Ok(0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalRow {
    pub theta: usize,
    pub closed_form: f64,
    pub scanned: f64,
    pub abs_diff: f64,
    pub transition_order: String,
}

impl Record for CriticalRow {
    fn header() -> &'static [&'static str] {
        &[
            "theta",
            "closed_form",
            "scanned",
            "abs_diff",
            "transition_order",
        ]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.theta.to_string(),
            real(self.closed_form),
            real(self.scanned),
            real(self.abs_diff),
            self.transition_order.clone(),
        ]
    }
}

pub fn critical_rows(thetas: &[usize]) -> Result<Vec<CriticalRow>> {
    ensure!(thetas.iter().all(|&t| t >= 2), "critical needs theta >= 2");
    thetas
        .par_iter()
        .map(|&theta| {
            let closed_form = beta_critical(theta)?;
            let scanned = scan_beta_critical(theta)?;
            Ok(CriticalRow {
                theta,
                closed_form,
                scanned,
                abs_diff: (closed_form - scanned).abs(),
                transition_order: if theta == 2 {
                    "continuous"
                } else {
                    "discontinuous"
                }
                .into(),
            })
        })
        .collect()
}

fn critical(cfg: &RunConfig) -> Result<i32> {
    let thetas = cfg.thetas()?.unwrap_or_else(|| vec![2, 3, 4, 5]);
    let rows = critical_rows(&thetas)?;
    output::emit(&rows, cfg.format(Format::Csv)?, cfg.path("out").as_deref())?;
    Ok(0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeEnergyRow {
    pub theta: usize,
    pub beta: f64,
    pub h: f64,
    pub z: f64,
    pub x_up: Vec<f64>,
    pub x_down: Vec<f64>,
    pub z_plus: f64,
    pub z_minus: f64,
}

impl Record for FreeEnergyRow {
    fn header() -> &'static [&'static str] {
        &[
            "theta", "beta", "h", "z", "x_up", "x_down", "z_plus", "z_minus",
        ]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.theta.to_string(),
            real(self.beta),
            real(self.h),
            real(self.z),
            real_list(&self.x_up),
            real_list(&self.x_down),
            real(self.z_plus),
            real(self.z_minus),
        ]
    }
}

pub fn free_energy_rows(theta: usize, betas: &[f64], fields: &[f64]) -> Result<Vec<FreeEnergyRow>> {
    ensure!(theta >= 2, "free-energy needs theta >= 2");
    let jobs: Vec<(f64, f64)> = betas
        .iter()
        .flat_map(|&b| fields.iter().map(move |&h| (b, h)))
        .collect();
    Ok(jobs
        .par_iter()
        .map(|&(beta, h)| {
            let report = maximize_phi(beta, theta);
            let c = 1.0 / theta as f64;
            FreeEnergyRow {
                theta,
                beta,
                h,
                z: z(beta, h, theta),
                x_up: report.x_up.coords().to_vec(),
                x_down: report.x_down.coords().to_vec(),
                z_plus: report.x_up.first() - c,
                z_minus: report.x_down.last() - c,
            }
        })
        .collect())
}

fn free_energy(cfg: &RunConfig) -> Result<i32> {
    let theta = cfg.theta(2)?;
    let betas = cfg.betas()?.unwrap_or_else(|| vec![1.0]);
    let fields = cfg.fields()?.unwrap_or_else(|| vec![0.0]);
    let rows = free_energy_rows(theta, &betas, &fields)?;
    output::emit(&rows, cfg.format(Format::Csv)?, cfg.path("out").as_deref())?;
    Ok(0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta: usize,
    pub beta: f64,
    pub h: f64,
    pub z: f64,
    pub z_plus: f64,
    pub z_minus: f64,
    /// `(1/n) ln Z_n(beta, h)` when a finite `n` was requested.
    pub density_n: Option<f64>,
}

impl Record for SweepRow {
    fn header() -> &'static [&'static str] {
        &["theta", "beta", "h", "z", "z_plus", "z_minus", "density_n"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.theta.to_string(),
            real(self.beta),
            real(self.h),
            real(self.z),
            real(self.z_plus),
            real(self.z_minus),
            opt_real(self.density_n),
        ]
    }
}

/// One row per `(theta, beta, h)` in lexicographic order.
pub fn sweep_rows(
    thetas: &[usize],
    betas: &[f64],
    fields: &[f64],
    n: Option<usize>,
) -> Result<Vec<SweepRow>> {
    ensure!(thetas.iter().all(|&t| t >= 2), "sweep needs theta >= 2");
    let mut jobs = Vec::new();
    for &t in thetas {
        for &b in betas {
            for &h in fields {
                jobs.push((t, b, h));
            }
        }
    }
    jobs.par_iter()
        .map(|&(theta, beta, h)| {
            let (z_plus, z_minus) = z_derivatives(beta, theta);
            let density_n = n
                .map(|n| cyclespin::characters::free_energy_density(n, theta, beta, h))
                .transpose()?;
            Ok(SweepRow {
                theta,
                beta,
                h,
                z: z(beta, h, theta),
                z_plus,
                z_minus,
                density_n,
            })
        })
        .collect()
}

fn sweep(cfg: &RunConfig) -> Result<i32> {
    let thetas = cfg.thetas()?.unwrap_or_else(|| vec![2]);
    let betas = match cfg.betas()? {
        Some(b) => b,
        None => crate::config::parse_range("0.5:5:0.5")?,
    };
    let fields = cfg.fields()?.unwrap_or_else(|| vec![0.0]);
    let rows = sweep_rows(&thetas, &betas, &fields, cfg.usize("n")?)?;
    output::emit(&rows, cfg.format(Format::Csv)?, cfg.path("out").as_deref())?;
    Ok(0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinPolyRow {
    pub spin: String,
    pub theta: usize,
    /// `a_0, .., a_{2S}` as exact fractions.
    pub coefficients: Vec<String>,
    /// Largest entry of the matrix residual; absent above `2S = 6`.
    pub deviation: Option<f64>,
}

impl Record for SpinPolyRow {
    fn header() -> &'static [&'static str] {
        &["spin", "theta", "coefficients", "deviation"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.spin.clone(),
            self.theta.to_string(),
            self.coefficients.join(";"),
            opt_real(self.deviation),
        ]
    }
}

pub fn spin_poly_rows(spins: &[Spin]) -> Result<Vec<SpinPolyRow>> {
    spins
        .par_iter()
        .map(|&spin| {
            let coeffs = swap_poly_coefficients(spin)?;
            let deviation = if spin.twice() <= MAX_VERIFY_TWICE_SPIN {
                Some(verify_swap_poly(spin)?)
            } else {
                None
            };
            Ok(SpinPolyRow {
                spin: spin.to_string(),
                theta: spin.theta(),
                coefficients: coeffs.coeffs.iter().map(|q| q.to_string()).collect(),
                deviation,
            })
        })
        .collect()
}

fn spin_poly(cfg: &RunConfig) -> Result<i32> {
    let spins = match (cfg.spins()?, cfg.thetas()?) {
        (Some(s), _) => s,
        (None, Some(t)) => t
            .iter()
            .map(|&t| Spin::from_theta(t))
            .collect::<Result<_, _>>()?,
        (None, None) => (1..=6).map(Spin::from_twice).collect(),
    };
    ensure!(
        spins.iter().all(|s| s.twice() >= 1),
        "spin-poly needs S >= 1/2"
    );
    let rows = spin_poly_rows(&spins)?;
    output::emit(&rows, cfg.format(Format::Csv)?, cfg.path("out").as_deref())?;
    Ok(0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEcho {
    pub n: usize,
    pub theta: f64,
    pub beta: f64,
    pub h: f64,
    pub samples: usize,
    pub seed: u64,
    pub chunk_size: usize,
    pub proposal_rate: Option<f64>,
    pub k: Option<usize>,
    pub eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub mean: f64,
    pub std_error: Option<f64>,
}

impl From<mc::Estimate> for EstimateRecord {
    fn from(e: mc::Estimate) -> Self {
        EstimateRecord {
            mean: e.mean,
            std_error: finite(e.std_error),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailRecord {
    pub estimate: f64,
    pub std_error: Option<f64>,
    pub ess: f64,
    pub reliable: bool,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub config: McEcho,
    /// Estimate of `Z_n(beta) = E[theta^ell]`.
    pub z: EstimateRecord,
    /// Effective sample size of the `theta^ell` weights.
    pub ess: f64,
    /// Estimate of `Z_n(beta, h)`; present when `h != 0`.
    pub z_field: Option<EstimateRecord>,
    /// `P_theta(X_n(k) >= eps)`; present when `k` is given.
    pub tail: Option<TailRecord>,
    /// Present only with `timing = true`.
    pub wall_time_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChunkRow {
    pub chunk: usize,
    pub samples: usize,
    pub z_mean: f64,
}

impl Record for ChunkRow {
    fn header() -> &'static [&'static str] {
        &["chunk", "samples", "z_mean"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.chunk.to_string(),
            self.samples.to_string(),
            real(self.z_mean),
        ]
    }
}

fn chunked_draws(cfg: &McConfig, rate: f64, k: Option<usize>) -> Vec<Vec<mc::Draw>> {
    (0..cfg.chunk_count())
        .into_par_iter()
        .map(|c| mc::draws_for_chunk(cfg, rate, c, k))
        .collect()
}

pub fn mc_report(cfg: &McConfig, k: Option<usize>, eps: f64) -> Result<(McReport, Vec<ChunkRow>)> {
    cfg.validate()?;
    ensure!((0.0..=1.0).contains(&eps), "eps must lie in [0, 1]");
    if let Some(k) = k {
        ensure!(k >= 1, "k must be at least 1");
    }
    let rate = cfg.proposal_rate.unwrap_or(1.0);
    let chunks = chunked_draws(cfg, rate, None);
    let chunk_rows = chunks
        .iter()
        .enumerate()
        .map(|(i, d)| ChunkRow {
            chunk: i,
            samples: d.len(),
            z_mean: mc::reduce_z(d, cfg.theta).mean,
        })
        .collect();
    let all = chunks.concat();
    let z_field = (cfg.h != 0.0).then(|| mc::reduce_z_field(&all).into());
    let tail = k.map(|k| {
        let rate = cfg
            .proposal_rate
            .unwrap_or_else(|| mc::default_tail_rate(cfg.theta));
        let t = mc::reduce_tail(&chunked_draws(cfg, rate, Some(k)).concat(), cfg.theta, eps);
        TailRecord {
            estimate: t.estimate,
            std_error: finite(t.std_error),
            ess: t.ess,
            reliable: t.reliable,
            rate,
        }
    });
    let report = McReport {
        config: McEcho {
            n: cfg.n,
            theta: cfg.theta,
            beta: cfg.beta,
            h: cfg.h,
            samples: cfg.samples,
            seed: cfg.seed,
            chunk_size: cfg.chunk_size,
            proposal_rate: cfg.proposal_rate,
            k,
            eps,
        },
        z: mc::reduce_z(&all, cfg.theta).into(),
        ess: mc::weight_ess(&all, cfg.theta),
        z_field,
        tail,
        wall_time_s: None,
    };
    Ok((report, chunk_rows))
}

fn run_mc(cfg: &RunConfig) -> Result<i32> {
    let start = Instant::now();
    ensure!(
        cfg.format(Format::Json)? == Format::Json,
        "mc writes a JSON report; use chunk-csv for per-chunk CSV"
    );
    let betas = cfg.betas()?.unwrap_or_else(|| vec![1.0]);
    ensure!(betas.len() == 1, "mc takes a single beta");
    let fields = cfg.fields()?.unwrap_or_else(|| vec![0.0]);
    ensure!(fields.len() == 1, "mc takes a single field");
    let mut mc_cfg = McConfig::new(
        cfg.usize("n")?.unwrap_or(6),
        cfg.theta_real(2.0)?,
        betas[0],
        cfg.usize("samples")?.unwrap_or(100_000),
        cfg.u64("seed")?.unwrap_or(1),
    );
    mc_cfg.h = fields[0];
    mc_cfg.proposal_rate = cfg.f64("proposal-rate")?;
    let eps = cfg.f64("eps")?.unwrap_or(0.5);
    let (mut report, chunks) = mc_report(&mc_cfg, cfg.usize("k")?, eps)?;
    if let Some(p) = cfg.path("chunk-csv") {
        output::emit(&chunks, Format::Csv, Some(&p))?;
    }
    let elapsed = start.elapsed().as_secs_f64();
    if cfg.flag("timing")? {
        report.wall_time_s = Some(elapsed);
    } else {
        log::info!("wall time {elapsed:.3} s");
    }
    output::write_text(&output::to_json(&report)?, cfg.path("out").as_deref())?;
    Ok(0)
}

fn verify(cfg: &RunConfig) -> Result<i32> {
    let opts = VerifyOptions {
        seed: cfg.u64("seed")?.unwrap_or(VerifyOptions::default().seed),
        fault: cfg
            .get("inject-fault")
            .map(|s| s.parse::<Fault>())
            .transpose()?,
    };
    let checks = suites::run_all(&opts);
    let text = match cfg.get("format") {
        None => suites::render_text(&checks),
        Some(_) => output::render(&checks, cfg.format(Format::Csv)?)?,
    };
    output::write_text(&text, cfg.path("out").as_deref())?;
    Ok(if checks.iter().all(|c| c.passed) {
        0
    } else {
        1
    })
}

/// Reads a manifest if given, then applies flag overrides.
pub fn build_config(
    command: &str,
    manifest: Option<&Path>,
    overrides: &[(&str, String)],
) -> Result<RunConfig> {
    let mut cfg = RunConfig::new(command);
    if let Some(p) = manifest {
        cfg.load_file(p)?;
    }
    cfg.apply_overrides(overrides)
        .context("invalid command-line parameters")?;
    Ok(cfg)
}
