use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use phenon_cli::output::write_artifacts;
use phenon_cli::run::{execute, with_jobs};
use phenon_cli::{Experiment, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "phenon",
    version,
    about = "Growth, decay and positivity experiments for p-Laplacian equations with absorption"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads for sweeps.
    #[arg(long, env = "PHENON_JOBS")]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form residuals and constant identities.
    ExactCheck(Common),
    /// Radial initial value problem.
    Shoot(Common),
    /// Radial Dirichlet problem.
    Bvp(Common),
    /// Finite-difference solve on the unit disc.
    #[command(name = "solve-2d")]
    Solve2d(Common),
    /// Growth exponent at a point.
    Fit(Common),
    /// Shell constant at an extremum point.
    Nondegeneracy(Common),
    /// Decay of solutions on growing balls.
    Liouville(Common),
    /// Positivity for m = p - 1.
    Borderline(Common),
    /// Exponent sweep over a parameter grid.
    Sweep(Common),
}

impl Command {
    fn split(self) -> (Experiment, Common) {
        match self {
            Command::ExactCheck(c) => (Experiment::ExactCheck, c),
            Command::Shoot(c) => (Experiment::Shoot, c),
            Command::Bvp(c) => (Experiment::Bvp, c),
            Command::Solve2d(c) => (Experiment::Solve2d, c),
            Command::Fit(c) => (Experiment::Fit, c),
            Command::Nondegeneracy(c) => (Experiment::Nondegeneracy, c),
            Command::Liouville(c) => (Experiment::Liouville, c),
            Command::Borderline(c) => (Experiment::Borderline, c),
            Command::Sweep(c) => (Experiment::Sweep, c),
        }
    }
}

fn run(experiment: Experiment, common: &Common) -> anyhow::Result<bool> {
    let config = ExperimentConfig::load(&common.config)?;
    let outcome = with_jobs(common.jobs, || execute(experiment, &config))??;
    write_artifacts(&outcome, &common.out)?;
    for (name, ok) in &outcome.report.checks {
        eprintln!("{}: {name}", if *ok { "pass" } else { "FAIL" });
    }
    Ok(outcome.report.pass)
}

fn main() -> ExitCode {
    let (experiment, common) = Cli::parse().command.split();
    match run(experiment, &common) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
