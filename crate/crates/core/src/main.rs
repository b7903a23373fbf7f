use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nls_fem::cli::{cmd_consistency, cmd_converge, cmd_run, CliError, Overrides, RunConfig};
use nls_fem::verification::Coupling;

#[derive(Parser)]
#[command(name = "nls-fem", version, about = "Linearly implicit FE solver for the 1-D nonlinear Schrödinger equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Advance one problem in time and report per-step norms and errors.
    Run(Common),
    /// Mesh-refinement study with empirical convergence rates.
    Converge(Common),
    /// Consistency residuals of the exact solution for a sweep of step sizes.
    Consistency(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum CouplingArg {
    KPropH,
    KPropHR2,
}

#[derive(Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    case: Option<String>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long, value_enum)]
    coupling: Option<CouplingArg>,
    /// Time-grid jitter as a fraction of the uniform step.
    #[arg(long)]
    jitter: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (.csv or .json); repeatable.
    #[arg(long)]
    out: Vec<PathBuf>,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut config = match &self.config {
            Some(p) => RunConfig::load(p).map_err(CliError::Config)?,
            None => RunConfig::default(),
        };
        config.apply(&Overrides {
            case: self.case.clone(),
            degree: self.degree,
            m: self.m,
            steps: self.steps,
            levels: self.levels,
            coupling: self.coupling.map(|c| match c {
                CouplingArg::KPropH => Coupling::KPropH,
                CouplingArg::KPropHR2 => Coupling::KPropHR2,
            }),
            jitter: self.jitter,
            seed: self.seed,
            out: self.out.clone(),
        });
        Ok(config)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(c) => c.resolve().and_then(|cfg| cmd_run(&cfg)),
        Command::Converge(c) => c.resolve().and_then(|cfg| cmd_converge(&cfg)),
        Command::Consistency(c) => c.resolve().and_then(|cfg| cmd_consistency(&cfg)),
    };
    match result {
        Ok(outcome) => {
            if outcome.exit_code != 0 {
                eprintln!("nls-fem: threshold not met");
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("nls-fem: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
