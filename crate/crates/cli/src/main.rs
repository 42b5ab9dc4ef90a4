//! `sconcave`: experiment harness for stochastic approximants of
//! s-concave functions.
//!
//! Exit codes: 0 when the run completed and every verdict passed, 2 when
//! it completed with a FAIL verdict (an inequality violated beyond its
//! tolerance), 1 for usage, config, or runtime errors.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use sconcave_cli::config::{ExperimentConfig, ExperimentKind};
use sconcave_cli::csvout::write_out;
use sconcave_cli::runner;

#[derive(Parser)]
#[command(
    name = "sconcave",
    version,
    about = "Stochastic experiments on s-concave functions"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Monte Carlo stochastic-dominance comparison against rearrangements.
    Theorem1(RunArgs),
    /// Dimensional-mean and rearrangement inequality checks.
    Bbl(RunArgs),
    /// Integral-ratio convergence sweep over the sample count.
    Converge(RunArgs),
    /// Convexity scan of a linear parameter system's integral.
    Shadow(RunArgs),
    /// Concavity scan of section profiles of a sampled hull.
    Brunn(RunArgs),
}

impl Cmd {
    fn kind(&self) -> ExperimentKind {
        match self {
            Cmd::Theorem1(_) => ExperimentKind::Theorem1,
            Cmd::Bbl(_) => ExperimentKind::Bbl,
            Cmd::Converge(_) => ExperimentKind::Converge,
            Cmd::Shadow(_) => ExperimentKind::Shadow,
            Cmd::Brunn(_) => ExperimentKind::Brunn,
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Cmd::Theorem1(a)
            | Cmd::Bbl(a)
            | Cmd::Converge(a)
            | Cmd::Shadow(a)
            | Cmd::Brunn(a) => a,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Master seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path; overrides the config. Stdout when absent in both.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Trial count; overrides the config.
    #[arg(long)]
    trials: Option<usize>,
}

fn execute(kind: ExperimentKind, args: &RunArgs) -> Result<bool> {
    let mut cfg = ExperimentConfig::from_path(&args.config)?;
    if cfg.experiment != kind {
        bail!(
            "config is for '{}' but the subcommand is '{}'",
            cfg.experiment.name(),
            kind.name()
        );
    }
    if let Some(seed) = args.seed {
        cfg.seed = Some(seed);
    }
    if let Some(trials) = args.trials {
        if trials == 0 {
            bail!("--trials must be at least 1");
        }
        cfg.trials = Some(trials);
    }
    let out = args
        .out
        .clone()
        .or_else(|| cfg.out.as_ref().map(PathBuf::from));

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads.unwrap_or(0))
        .build()?;
    let report = pool.install(|| runner::run(&cfg))?;

    write_out(out.as_deref(), &report.csv)?;
    eprintln!("{}", report.summary);
    Ok(report.pass)
}

fn main() -> ExitCode {
    // Clap's own exit convention reserves 2 for usage errors; here 2 means
    // a FAIL verdict, so usage errors are remapped to 1.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.cmd.kind(), cli.cmd.args()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
