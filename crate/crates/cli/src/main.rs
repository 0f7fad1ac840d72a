//! `flatvol`: volumes of moduli spaces of flat connections from the command line.

mod commands;
mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flatvol::Error;

#[derive(Parser, Debug)]
#[command(name = "flatvol", version, about = "Symplectic volumes of moduli spaces of flat connections")]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the root system, alcove and volume constants as JSON.
    Roots {
        /// Group type such as A1, A2, B2, G2.
        group: String,
    },
    /// Volume of the pair of pants with the given markings.
    Volume {
        group: String,
        /// Three markings in fundamental coordinates, e.g. `1/3,1/4`; may be
        /// given as one space-separated argument.
        #[arg(required = true, num_args = 1..)]
        markings: Vec<String>,
        #[arg(long, value_enum, default_value_t = Method::Kappa)]
        method: Method,
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Tabulate the volume along a segment of third markings as CSV.
    Scan {
        group: String,
        /// The two fixed markings.
        #[arg(required = true, num_args = 1..)]
        markings: Vec<String>,
        /// Segment `START:END` of third markings, e.g. `0:1` or `0,0:1/2,1/2`.
        #[arg(long)]
        along: String,
        /// Number of steps; `N + 1` rows.
        #[arg(long, default_value_t = 10)]
        steps: u32,
        #[arg(long, value_enum, default_value_t = Method::Kappa)]
        method: Method,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Mixed characteristic number `(φ*p)(∂/∂μ3)` of the pants volume.
    Chern {
        group: String,
        #[arg(required = true, num_args = 1..)]
        markings: Vec<String>,
        /// Polynomial in elementary symmetric functions, e.g. `1`, `e1`, `e1^2+e2`.
        #[arg(long)]
        poly: String,
    },
    /// Monte-Carlo histogram of the class of a product, with its distance
    /// to the κ prediction.
    Oracle {
        group: String,
        #[arg(required = true, num_args = 1..)]
        markings: Vec<String>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Intervals (A1) or subdivisions per side (A2).
        #[arg(long, default_value_t = 100)]
        bins: usize,
        /// Histogram CSV; a JSON sidecar is written next to it.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Volume of a glued surface by quadrature over the alcove.
    Glue {
        group: String,
        /// `torus1` (genus one, one hole) or `sphere4` (four holes).
        decomposition: String,
        #[arg(required = true, num_args = 1..)]
        markings: Vec<String>,
        /// Gauss points per direction on each cell.
        #[arg(long, default_value_t = 4)]
        nodes: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Kappa,
    Witten,
    Toric,
    All,
}

/// Parameters of the character series.
#[derive(Args, Debug, Clone)]
struct SeriesArgs {
    /// Bound on `|λ+ρ|²` for the character series.
    #[arg(long)]
    cutoff: Option<f64>,
    /// Heat-kernel parameters, comma-separated.
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// Relative extrapolation residual tolerated before exit code 4.
    #[arg(long)]
    tolerance: Option<f64>,
}

/// Exit status for an engine error.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::OnWall(_) | Error::NotRegular(_) => 3,
        Error::Convergence(_) => 4,
        Error::Io(_) | Error::DegenerateDensity(_) | Error::DegenerateArrangement(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            if exit_code(&e) == 2 {
                eprintln!("run `flatvol --help` for usage");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
