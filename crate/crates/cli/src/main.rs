//! Command-line front end: Stein-factor bounds, oracle verification,
//! parameter sweeps and table dumps.

mod commands;
mod input;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{BoundsArgs, Outcome, PmfArgs, SteinSolveArgs, SweepArgs, VerifyArgs};
use output::OutputArgs;

const EXIT_VIOLATED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "cpstein", version, about = "Compound Poisson Stein factors and approximation checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Every Stein-factor bound and the best of them.
    Bounds {
        #[command(flatten)]
        args: BoundsArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check the bounds against the numerically solved Stein equation and,
    /// for models, the Kolmogorov distance against the exact law.
    Verify {
        #[command(flatten)]
        args: VerifyArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Bounds over a grid of model parameters.
    Sweep {
        #[command(flatten)]
        args: SweepArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Solve the Stein equation for one threshold.
    SteinSolve {
        #[command(flatten)]
        args: SteinSolveArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Probability table of the approximation or of the model statistic.
    Pmf {
        #[command(flatten)]
        args: PmfArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<cpstein::Error>() {
        Some(
            cpstein::Error::BudgetExceeded(_)
            | cpstein::Error::TruncationCapExceeded(_)
            | cpstein::Error::NotConverged(_),
        ) => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let (outcome, out): (Outcome, &OutputArgs) = match &cli.command {
        Command::Bounds { args, out } => (commands::bounds(args)?, out),
        Command::Verify { args, out } => (commands::verify(args)?, out),
        Command::Sweep { args, out } => (commands::sweep(args)?, out),
        Command::SteinSolve { args, out } => (commands::stein_solve(args)?, out),
        Command::Pmf { args, out } => (commands::pmf(args)?, out),
    };
    output::emit(&outcome.report, out)?;
    Ok(outcome.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VIOLATED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
