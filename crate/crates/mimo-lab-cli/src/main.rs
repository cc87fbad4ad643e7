//! `mimo-lab`: a desk-scale laboratory for multi-cell massive MIMO downlink
//! performance under correlated channels and pilot contamination.
//!
//! Closed forms, Monte Carlo verification, scaling-law calculus, and
//! reproducible dataset generation share one binary; see `--help` of each
//! subcommand.

mod commands;
mod error;
mod output;
mod plot;
mod select;

use clap::Parser;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "mimo-lab",
    version,
    about = "Multi-cell massive MIMO downlink laboratory: closed forms, Monte Carlo, scaling laws",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Subcommand)]
enum Command {
    /// Closed-form curves of the selected cases over their antenna grids
    Analytic(commands::AnalyticArgs),
    /// Monte Carlo sweep of the selected cases
    Simulate(commands::SimulateArgs),
    /// Growth-exponent calculus for a resource-scaling trajectory
    Scaling(commands::ScalingArgs),
    /// Dominance-margin verdict: do the large-system formulas apply here?
    CheckApplicability(commands::CheckArgs),
    /// Monte Carlo verification of the closed-form moments
    VerifyMoments(commands::VerifyArgs),
    /// Fit the simulated SINR growth exponent of one case
    Fit(commands::FitArgs),
    /// Rebuild a complete dataset (figure or table) into a directory
    Reproduce(commands::ReproduceArgs),
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Analytic(a) => commands::analytic(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Scaling(a) => commands::scaling(a),
        Command::CheckApplicability(a) => commands::check_applicability(a),
        Command::VerifyMoments(a) => commands::verify_moments(a),
        Command::Fit(a) => commands::fit(a),
        Command::Reproduce(a) => commands::reproduce(a),
    }
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn main() {
    std::process::exit(real_main());
}
