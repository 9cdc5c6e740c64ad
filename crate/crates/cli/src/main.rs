//! `rgfp`: condition checks, certificates and fixed points for `rg-w/1`
//! model files.
//!
//! Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 refutation of a
//! certificate, 64 usage, 65 malformed input, 66 unreadable input,
//! 74 output error.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "rgfp",
    version,
    about = "Exact checks and fixed points for 2-D gradient RG maps"
)]
struct Cli {
    /// Omit wall-clock timings from reports, making them byte-reproducible.
    #[arg(long, global = true)]
    no_timings: bool,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
pub struct ModelArgs {
    /// Model file in the rg-w/1 format.
    pub model: PathBuf,
    /// Override a template parameter, e.g. `eps=27/10`.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the class conditions on a model.
    Check {
        #[command(flatten)]
        model: ModelArgs,
        /// Only the existence conditions (no R_n or structural checks).
        #[arg(long)]
        existence_only: bool,
        /// Largest Bernstein degree for certificates (also RGFP_MAX_ELEVATION).
        #[arg(long, value_name = "N")]
        max_elevation: Option<u32>,
        /// Write the JSON report here (`-` for standard output).
        #[arg(long, value_name = "FILE")]
        json: Option<String>,
    },
    /// Certify positivity of the Jacobian witness over the whole family.
    Certify {
        /// Which certificates to build.
        #[arg(long, value_enum, default_value_t = CertifyMode::Both)]
        mode: CertifyMode,
        /// Random parameter points for the appendix identity.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Seed for the random parameter points.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also compare the appendix identity symbolically.
        #[arg(long)]
        symbolic: bool,
        /// Certificate file for the independent certificate.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Certificate file for the transcribed appendix form.
        #[arg(long, value_name = "FILE")]
        appendix_out: Option<PathBuf>,
        /// Also certify `e` of this concrete model.
        #[arg(long, value_name = "MODEL")]
        model: Option<PathBuf>,
        /// Override a template parameter of `--model`, e.g. `eps=27/10`.
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        /// Largest Bernstein degree for certificates (also RGFP_MAX_ELEVATION).
        #[arg(long, value_name = "N")]
        max_elevation: Option<u32>,
        /// Write the JSON report here (`-` for standard output).
        #[arg(long, value_name = "FILE")]
        json: Option<String>,
    },
    /// Locate the interior fixed point.
    Fixpoint {
        #[command(flatten)]
        model: ModelArgs,
        /// Bisection tolerance on the G = 1 contour.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Newton scan from an N x N grid to test uniqueness.
        #[arg(long, value_name = "N")]
        scan: Option<usize>,
        /// Scan the quadrant box [0, X] x [0, Y] instead of the strip.
        #[arg(long, value_name = "X,Y")]
        quadrant: Option<String>,
        /// Proceed even if the model fails its checks.
        #[arg(long)]
        force: bool,
        /// Write the JSON report here (`-` for standard output).
        #[arg(long, value_name = "FILE")]
        json: Option<String>,
    },
    /// Iterate the map from a starting point.
    Iterate {
        #[command(flatten)]
        model: ModelArgs,
        /// Starting point.
        #[arg(long, value_name = "X,Y", allow_hyphen_values = true)]
        from: String,
        /// Maximum number of iterations.
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// Write the JSON report here (`-` for standard output).
        #[arg(long, value_name = "FILE")]
        json: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CertifyMode {
    Appendix,
    Independent,
    Both,
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Pass = 0,
    Fail = 1,
    Inconclusive = 2,
    Refutation = 3,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Unreadable(String),
    Output(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Input(_) => 65,
            CliError::Unreadable(_) => 66,
            CliError::Output(_) => 74,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Input(m)
            | CliError::Unreadable(m)
            | CliError::Output(m) => m,
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let timings = !cli.no_timings;
    match cli.command {
        Command::Check {
            model,
            existence_only,
            max_elevation,
            json,
        } => commands::check::run(
            &model,
            existence_only,
            max_elevation,
            json.as_deref(),
            timings,
        ),
        Command::Certify {
            mode,
            trials,
            seed,
            symbolic,
            out,
            appendix_out,
            model,
            params,
            max_elevation,
            json,
        } => commands::certify::run(commands::certify::Args {
            mode,
            trials,
            seed,
            symbolic,
            out,
            appendix_out,
            model,
            params,
            max_elevation,
            json,
            timings,
        }),
        Command::Fixpoint {
            model,
            tol,
            scan,
            quadrant,
            force,
            json,
        } => commands::fixpoint::run(
            &model,
            tol,
            scan,
            quadrant.as_deref(),
            force,
            json.as_deref(),
            timings,
        ),
        Command::Iterate {
            model,
            from,
            steps,
            json,
        } => commands::iterate::run(&model, &from, steps, json.as_deref(), timings),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(64)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(outcome) => ExitCode::from(outcome as u8),
        Err(e) => {
            eprintln!("rgfp: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
