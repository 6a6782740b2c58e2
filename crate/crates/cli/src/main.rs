//! `dtpassive`: command-line front end over the JSON interchange formats.
//!
//! Exit status: 0 pass / yes / certified, 1 fail / no, 2 inconclusive,
//! 64 usage error, 65 input error, 74 output error. Results go to standard
//! output (or `--out`), diagnostics to standard error.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::io::parse_reals;

#[derive(Parser, Debug)]
#[command(name = "dtpassive", version, about = "Stein sets, DB functions and KYP certificates")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Tolerance override; its meaning is per command (see the command help).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Sample angles per radius for boundary sampling.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Comma-separated sampling radii, each greater than 1.
    #[arg(long, global = true, value_parser = parse_radii)]
    pub radii: Option<Radii>,
    /// Seed for randomized schedules.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Debug)]
pub struct Radii(pub Vec<f64>);

fn parse_radii(s: &str) -> Result<Radii, String> {
    parse_reals(s).map(Radii)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Membership of a matrix in a scaled Stein set (--tol: PSD tolerance).
    SteinCheck {
        /// Stein set JSON: {"H": <matrix>, "alpha": a, "closed": bool}.
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Builds A with ||A|| < 1 and spectral_radius(AB) > 1 from B with ||B|| > 1.
    SteinWitness {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Matrix-convex combination sum v_j* A_j v_j.
    Mconvex {
        /// Isometry tuple JSON: {"n": n, "blocks": [<matrix>, ...]}.
        #[arg(long)]
        tuple: PathBuf,
        /// One matrix file per tuple block, in order.
        #[arg(long, num_args = 1.., required = true)]
        blocks: Vec<PathBuf>,
    },
    /// KYP residual test with a given certificate, or P = I (--tol: PSD tolerance).
    KypCheck {
        #[arg(long)]
        realization: PathBuf,
        /// Certificate P; omitted means the balanced test P = I.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Searches a KYP certificate by the bounded-real Riccati iteration
    /// (--tol: relative stopping step).
    CertifyRiccati {
        #[arg(long)]
        realization: PathBuf,
        #[arg(long, default_value_t = 20_000)]
        max_iter: usize,
    },
    /// Changes coordinates so that P = I certifies the realization.
    Balance {
        #[arg(long)]
        realization: PathBuf,
        /// Certificate P; searched for when omitted.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// DB membership by certificate and boundary sampling (--tol: allowed excess over 1).
    DbCheck {
        #[arg(long)]
        realization: PathBuf,
    },
    /// Matrix-convex combination of DB functions, then db-check.
    DbCombine {
        /// Isometry tuple over the function dimensions.
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        realizations: Vec<PathBuf>,
    },
    /// Cascade product realization of F_a F_b.
    SeriesProduct {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Also db-check the factors and the product.
        #[arg(long)]
        check: bool,
    },
    /// Trajectory of a difference inclusion x(j+1) = A(j) x(j).
    Simulate {
        /// Matrix set JSON: {"n": n, "members": [<matrix>, ...]}.
        #[arg(long)]
        set: PathBuf,
        /// Comma-separated initial state.
        #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
        x0: State,
        #[arg(long)]
        steps: usize,
        /// fixed:<i,j,...> (cyclic), random (uses --seed), or greedy.
        #[arg(long, default_value = "random")]
        schedule: String,
    },
    /// Certifies exponential convergence of a difference inclusion.
    CertifyInclusion {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        alpha: f64,
        /// Weight H for the induced-norm variant.
        #[arg(long, conflicts_with = "search_weight")]
        weight: Option<PathBuf>,
        /// Search H over diag(1, t, t^2, ...).
        #[arg(long)]
        search_weight: bool,
    },
    /// Builds the generated family of realizations and re-checks its values.
    DemoExamples {
        #[arg(long, default_value_t = 0.5)]
        theta: f64,
        #[arg(long, default_value_t = 3.0)]
        a: f64,
    },
}

#[derive(Clone, Debug)]
pub struct State(pub Vec<f64>);

fn parse_state(s: &str) -> Result<State, String> {
    parse_reals(s).map(State)
}

/// Verdict-level outcome of a successful run.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Inconclusive => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("dtpassive: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
