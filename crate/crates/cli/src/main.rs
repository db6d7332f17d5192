//! `varkelly` command-line interface.
//!
//! Data goes to stdout (JSON or CSV), diagnostics to stderr. Exit codes:
//! 0 success (including a no-bet answer), 2 invalid input, 3 solver or
//! quadrature non-convergence, 4 game not favorable, 5 degenerate trade data.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::CliError;

#[derive(Parser)]
#[command(name = "varkelly", version, about = "Kelly fractions for games with random payoffs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the optimal betting fraction
    Solve {
        #[command(flatten)]
        game: GameArgs,
        /// Bracket-width tolerance on the fraction
        #[arg(long, default_value_t = varkelly_core::DEFAULT_TOL)]
        tol: f64,
    },
    /// Sample the expected log growth g(f) on a uniform grid as CSV
    Curve {
        #[command(flatten)]
        game: GameArgs,
        /// Number of grid intervals; rows are f = j/(m+1), j = 0..=m
        #[arg(long, default_value_t = 100)]
        m: usize,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo simulation of repeated play at a fixed fraction
    Simulate {
        #[command(flatten)]
        game: GameArgs,
        /// Fraction of the bankroll staked each round
        #[arg(long)]
        f: f64,
        #[arg(long, default_value_t = 10_000)]
        n_rounds: u64,
        #[arg(long, default_value_t = 64)]
        n_paths: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Initial bankroll
        #[arg(long, default_value_t = 1.0)]
        x0: f64,
        /// Worker threads (output does not depend on this)
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Compare the optimal fraction with the classical fraction at the mean payoff
    Compare {
        #[command(flatten)]
        game: GameArgs,
    },
    /// Estimate win probability and payoff distribution from a trade CSV
    Ingest {
        /// CSV of `outcome,payoff` rows
        #[arg(long)]
        csv: PathBuf,
        /// Bin win payoffs into an equal-width histogram
        #[arg(long)]
        bins: Option<usize>,
        /// Write the summary JSON here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write just the distribution spec here (usable with --dist-file)
        #[arg(long)]
        spec_out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "dist_source")]
struct DistSource {
    /// Distribution spec as inline JSON, e.g. '{"type":"dirac","b":1}'
    #[arg(long, group = "dist_source")]
    dist: Option<String>,
    /// Path to a JSON distribution spec
    #[arg(long, group = "dist_source")]
    dist_file: Option<PathBuf>,
}

#[derive(Args)]
struct GameArgs {
    /// Win probability, 0 < p < 1
    #[arg(long)]
    p: f64,
    #[command(flatten)]
    source: DistSource,
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Solve { game, tol } => commands::solve(&game.build()?, tol),
        Command::Curve { game, m, out } => commands::curve(&game.build()?, m, out.as_deref()),
        Command::Simulate {
            game,
            f,
            n_rounds,
            n_paths,
            seed,
            x0,
            threads,
        } => {
            let cfg = varkelly_core::SimConfig {
                n_rounds,
                n_paths,
                f,
                seed,
                x0,
            };
            commands::simulate(&game.build()?, &cfg, threads)
        }
        Command::Compare { game } => commands::compare(&game.build()?),
        Command::Ingest {
            csv,
            bins,
            out,
            spec_out,
        } => commands::ingest(&csv, bins, out.as_deref(), spec_out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(stdout) => {
            if !stdout.is_empty() {
                println!("{stdout}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("varkelly: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl GameArgs {
    fn build(&self) -> Result<varkelly_core::GameSpec, CliError> {
        let dist = commands::parse_dist(self.source.dist.as_deref(), self.source.dist_file.as_deref())?;
        Ok(varkelly_core::GameSpec::new(self.p, dist)?)
    }
}
