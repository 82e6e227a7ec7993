use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cyclespin_cli::commands;

#[derive(Parser)]
#[command(
    name = "cyclespin",
    version,
    about = "Exact and Monte Carlo evaluation of the mean-field interchange model"
)]
struct Cli {
    /// More log output on stderr (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare trace, character and Monte Carlo values of Z_n(beta).
    ExactCompare(Params),
    /// Closed-form and scanned critical inverse temperatures.
    Critical(Params),
    /// Limiting free energy and extremal maximizers.
    FreeEnergy(Params),
    /// Monte Carlo estimates as a JSON report.
    Mc(Params),
    /// Swap-operator polynomial coefficients.
    SpinPoly(Params),
    /// Free-energy grid over (theta, beta, h).
    Sweep(Params),
    /// Run every invariant suite and print a pass/fail matrix.
    Verify(Params),
}

#[derive(Args, Default)]
struct Params {
    /// key = value manifest; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Local dimension(s), comma separated.
    #[arg(long, conflicts_with = "spin")]
    theta: Option<String>,
    /// Spin(s) such as 1/2,1,3/2; theta = 2S + 1.
    #[arg(long)]
    spin: Option<String>,
    /// Inverse temperature(s), comma separated.
    #[arg(long, conflicts_with = "beta_range")]
    beta: Option<String>,
    /// min:max:step.
    #[arg(long)]
    beta_range: Option<String>,
    /// External field(s) h, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    field: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<String>,
    /// Cycle length threshold for the long-cycle tail (mc).
    #[arg(long)]
    k: Option<String>,
    /// Tail level eps in P(X_n(k) >= eps) (mc).
    #[arg(long)]
    eps: Option<String>,
    /// Ring rate of the sampling process (mc).
    #[arg(long)]
    proposal_rate: Option<String>,
    /// Per-chunk CSV output (mc).
    #[arg(long)]
    chunk_csv: Option<String>,
    /// Per-partition G rows CSV (exact-compare).
    #[arg(long)]
    g_rows: Option<String>,
    /// Corrupt one engine table to check the suites notice (verify).
    #[arg(long)]
    inject_fault: Option<String>,
    /// Include wall time in the mc report.
    #[arg(long)]
    timing: bool,
}

impl Params {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let pairs: [(&'static str, &Option<String>); 16] = [
            ("theta", &self.theta),
            ("spin", &self.spin),
            ("beta", &self.beta),
            ("beta-range", &self.beta_range),
            ("field", &self.field),
            ("n", &self.n),
            ("samples", &self.samples),
            ("seed", &self.seed),
            ("format", &self.format),
            ("out", &self.out),
            ("k", &self.k),
            ("eps", &self.eps),
            ("proposal-rate", &self.proposal_rate),
            ("chunk-csv", &self.chunk_csv),
            ("g-rows", &self.g_rows),
            ("inject-fault", &self.inject_fault),
        ];
        let mut out: Vec<(&'static str, String)> = pairs
            .into_iter()
            .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
            .collect();
        if self.timing {
            out.push(("timing", "true".into()));
        }
        out
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let (name, params) = match &cli.command {
        Command::ExactCompare(p) => ("exact-compare", p),
        Command::Critical(p) => ("critical", p),
        Command::FreeEnergy(p) => ("free-energy", p),
        Command::Mc(p) => ("mc", p),
        Command::SpinPoly(p) => ("spin-poly", p),
        Command::Sweep(p) => ("sweep", p),
        Command::Verify(p) => ("verify", p),
    };
    let result = commands::build_config(name, params.config.as_deref(), &params.overrides())
        .and_then(|cfg| commands::run(&cfg));
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
