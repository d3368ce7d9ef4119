//! `matfield` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod catalog;
mod commands;
mod error;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use catalog::MetricArgs;
use commands::{CosmoArgs, Outcome, OrbitArgs, RadialArgs};
use error::CliError;
use output::Format;

#[derive(Debug, Parser)]
#[command(name = "matfield", version, about = "Curvature, orbits and cosmology of matrix-form metric models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for sampled points and random flat frames.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Christoffel, Riemann and Ricci matrices and eigenvalues at points.
    Curvature {
        #[command(flatten)]
        metric: MetricArgs,
        /// Point `x1,x2,x3,x4`; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        point: Vec<String>,
        /// Number of sampled points when no --point is given.
        #[arg(long, default_value_t = 1)]
        grid: usize,
    },
    /// Check the field equation at sampled points.
    Verify {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: Vec<String>,
        #[arg(long, default_value_t = 10)]
        grid: usize,
        /// Expected density, overriding the metric's own.
        #[arg(long, allow_hyphen_values = true)]
        expect_rho: Option<f64>,
        #[arg(long, default_value_t = matfield::tolerances::FIELD_EQUATION_RESIDUAL)]
        tol: f64,
    },
    /// Run the curvature identity suite.
    Identities {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: Vec<String>,
        #[arg(long, default_value_t = 5)]
        grid: usize,
    },
    /// Integrate a plane orbit and emit the trajectory.
    Orbit(OrbitArgs),
    /// Precession and extreme-velocity tables for a planets file.
    Planets {
        /// `name,perihelion_km,aphelion_km,period_days` CSV; defaults to the bundled file.
        #[arg(long)]
        planets: Option<PathBuf>,
        /// `key = value` constants file; defaults to the bundled file.
        #[arg(long)]
        constants: Option<PathBuf>,
    },
    /// Radial infall velocity profiles.
    Radial(RadialArgs),
    /// Density curves, eigenvalues and spectrum fits.
    Cosmo(CosmoArgs),
    /// Curvature of a seeded random flat-frame construction.
    Flatdemo {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        grid: usize,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let seed = cli.seed;
    let outcome: Outcome = match cli.command {
        Command::Curvature { metric, point, grid } => commands::curvature(&metric, &point, grid, seed)?,
        Command::Verify { metric, point, grid, expect_rho, tol } => {
            commands::verify(&metric, &point, grid, seed, expect_rho, tol)?
        }
        Command::Identities { metric, point, grid } => commands::identities(&metric, &point, grid, seed)?,
        Command::Orbit(args) => commands::orbit(&args)?,
        Command::Planets { planets, constants } => commands::planets(planets.as_deref(), constants.as_deref())?,
        Command::Radial(args) => commands::radial(&args)?,
        Command::Cosmo(args) => commands::cosmo(&args)?,
        Command::Flatdemo { dim, grid } => commands::flatdemo(dim, grid, seed)?,
    };
    match &cli.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            outcome.table.write(cli.format, &mut w)?;
            w.flush().map_err(CliError::io)?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            outcome.table.write(cli.format, &mut w)?;
            w.flush().map_err(CliError::io)?;
        }
    }
    match (outcome.failure, outcome.summary) {
        (Some(reason), _) => Err(CliError::Check(reason)),
        (None, Some(summary)) => {
            eprintln!("{summary}");
            Ok(())
        }
        (None, None) => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let message: Vec<&str> = text
                .lines()
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .map(|l| l.trim_start_matches("error:").trim())
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("{}", CliError::Usage(message.join(" ")));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
