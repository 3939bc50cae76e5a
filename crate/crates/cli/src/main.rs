//! `isotone-kit`: batch front-end for isotone-core.
//!
//! Exit codes: 0 success, 2 input error, 3 property or certification
//! failure, 1 when an output file cannot be written.

mod commands;
mod io;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use isotone_core::bkc::{NamedFunction, DEFAULT_GRID_POINTS, DEFAULT_SAMPLES};
use isotone_core::choquet::PropertyConfig;
use isotone_core::demo::MinorantConfig;
use isotone_core::matrix_order::MatrixSuiteConfig;
use isotone_core::rng::DEFAULT_SEED;

use commands::{BkcArgs, Status};

#[derive(Debug, Parser)]
#[command(name = "isotone-kit", version, about = "Choquet integrals, capacities, matrix order and isotonicity certificates")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Seed for every randomized check.
    #[arg(long, global = true, env = "ISOTONE_KIT_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a capacity file and report submodularity.
    CapacityCheck {
        #[arg(long)]
        capacity: PathBuf,
    },
    /// Materialize u∘P for a probability vector P.
    Distort {
        /// Comma-separated probability weights.
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<f64>,
        /// identity, sqrt, power:<alpha>, pl:<x>,<y>;..., inline JSON or a file.
        #[arg(long, default_value = "sqrt")]
        distortion: String,
    },
    /// Discrete Choquet integral of a function over a subset.
    Integrate {
        #[arg(long)]
        capacity: PathBuf,
        #[arg(long)]
        function: PathBuf,
        /// Subset bitmask (decimal, 0b..., 0x...) or "full".
        #[arg(long, default_value = "full")]
        set: String,
    },
    /// Randomized axiom and subadditivity checks of the integral.
    Properties {
        #[arg(long)]
        capacity: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
    /// Sup-norm error table of the Bernstein-Kantorovich-Choquet operator (CSV).
    Bkc {
        #[arg(long = "degree", value_delimiter = ',', default_values_t = [4usize, 16, 64])]
        degrees: Vec<usize>,
        #[arg(long, default_value = "identity")]
        distortion: String,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
        /// identity, square, sqrt, sin, abs-center or const:<c>.
        #[arg(long, default_value = "identity")]
        function: NamedFunction,
    },
    /// Decide isotonicity of a max-affine map.
    Certify {
        #[arg(long)]
        map: PathBuf,
        /// Restrict to the nonnegative orthant.
        #[arg(long)]
        cone: bool,
        /// Random monotone pairs used to cross-check a certificate.
        #[arg(long, default_value_t = 10_000)]
        probes: usize,
    },
    /// Largest-eigenvalue subgradients, Weyl inequalities and Löwner-Heinz powers.
    SymDemo {
        #[arg(long, default_value_t = 6)]
        dim: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        /// Exponents for the Löwner-Heinz check; those above 1 are expected to fail.
        #[arg(long = "power", value_delimiter = ',', default_values_t = [0.25, 0.5, 0.9, 2.0])]
        powers: Vec<f64>,
    },
    /// Tangent positive linear minorant of a vector of Choquet integrals.
    ChoquetDemo {
        /// Two to four submodular capacities on the same ground set.
        #[arg(long = "capacity", required = true, num_args = 1)]
        capacities: Vec<PathBuf>,
        /// Nonnegative function with distinct values.
        #[arg(long)]
        function: PathBuf,
        #[arg(long, default_value_t = 1000)]
        probes: usize,
    },
}

fn run(cli: Cli) -> Result<Status, io::CliError> {
    let out = cli.output.as_deref();
    match cli.command {
        Command::CapacityCheck { capacity } => commands::capacity_check(&capacity, out),
        Command::Distort { weights, distortion } => commands::distort(&weights, &distortion, out),
        Command::Integrate { capacity, function, set } => commands::integrate(&capacity, &function, &set, out),
        Command::Properties {
            capacity,
            trials,
            tolerance,
        } => {
            let cfg = PropertyConfig {
                trials,
                seed: cli.seed,
                tolerance,
            };
            commands::properties(&capacity, cfg, out)
        }
        Command::Bkc {
            degrees,
            distortion,
            samples,
            grid_points,
            function,
        } => {
            let args = BkcArgs {
                degrees,
                distortion,
                samples,
                grid_points,
                function,
            };
            commands::bkc(&args, out)
        }
        Command::Certify { map, cone, probes } => commands::certify(&map, cone, probes, cli.seed, out),
        Command::SymDemo {
            dim,
            trials,
            tolerance,
            powers,
        } => {
            if dim == 0 {
                return Err(io::CliError::Input("--dim must be positive".into()));
            }
            let cfg = MatrixSuiteConfig {
                dim,
                trials,
                seed: cli.seed,
                tolerance,
            };
            commands::sym(cfg, &powers, out)
        }
        Command::ChoquetDemo {
            capacities,
            function,
            probes,
        } => {
            if !(2..=4).contains(&capacities.len()) {
                return Err(io::CliError::Input(format!(
                    "choquet-demo takes 2 to 4 capacities, got {}",
                    capacities.len()
                )));
            }
            let cfg = MinorantConfig {
                probes,
                seed: cli.seed,
                ..Default::default()
            };
            commands::choquet_demo(&capacities, &function, cfg, out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
