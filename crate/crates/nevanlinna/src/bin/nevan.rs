use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

use nevanlinna::cli::schema::{parse_scalar, FunctionSpec, Prop8Json, RealizationJson, ReductionJson};
use nevanlinna::cli::{self, CliError, KappaMethod, Report};
use nevanlinna::linalg::Scalar;
use nevanlinna::ratfun::RationalMatrixFunction;
use nevanlinna::sumcriteria::ScanStrategy;

/// Exact analysis of rational generalized Nevanlinna functions.
#[derive(Parser, Debug)]
#[command(name = "nevan", version)]
struct Args {
    /// Print a short text summary instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Method {
    Sample,
    Model,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Scan {
    Grid,
    Algebraic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate Q at a point.
    Eval {
        #[arg(long = "fn")]
        function: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Add a decimal rendering of the value (non-authoritative).
        #[arg(long)]
        decimal: bool,
    },
    /// Number of negative squares of the Nevanlinna kernel.
    Kappa {
        #[arg(long = "fn")]
        function: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Whether κ(Q₁ + Q₂) = κ(Q₁) + κ(Q₂), with both routes cross-checked.
    SumAnalyze {
        #[arg(long)]
        fn1: PathBuf,
        #[arg(long)]
        fn2: PathBuf,
        #[arg(long, value_enum)]
        scan: Option<Scan>,
        /// Lattice points per variable for the grid scan.
        #[arg(long, default_value_t = 4)]
        grid_points: usize,
    },
    /// Check whether a subspace reduces a self-adjoint relation.
    ReduceCheck {
        #[arg(long)]
        input: PathBuf,
    },
    /// Split a realization along Jordan chains at a real eigenvalue.
    Decompose {
        #[arg(long)]
        realization: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        alpha: String,
    },
    /// Build the two-neutral-eigenvector model and test separation.
    Prop8 {
        /// Parameter file; defaults to A11 = [[0,1],[1,0]], a1 = e1, a2 = e2, α = 1.
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Singular directions of Q and the sampled kernel signature.
    Kersym {
        #[arg(long = "fn")]
        function: PathBuf,
    },
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_function(path: &Path) -> Result<RationalMatrixFunction, CliError> {
    read_json::<FunctionSpec>(path)?.to_function()
}

fn scalar_arg(s: &str) -> Result<Scalar, CliError> {
    parse_scalar(s).map_err(CliError::Usage)
}

fn run(command: Command) -> Result<Report, CliError> {
    match command {
        Command::Eval { function, at, decimal } => cli::eval(&read_function(&function)?, &scalar_arg(&at)?, decimal),
        Command::Kappa { function, method } => {
            let method = match method {
                Method::Sample => KappaMethod::Sample,
                Method::Model => KappaMethod::Model,
                Method::Both => KappaMethod::Both,
            };
            cli::kappa(&read_function(&function)?, method)
        }
        Command::SumAnalyze { fn1, fn2, scan, grid_points } => {
            let strategy = scan.map(|s| match s {
                Scan::Grid => ScanStrategy::Grid { points: grid_points },
                Scan::Algebraic => ScanStrategy::Algebraic,
            });
            cli::sum_analyze(&read_function(&fn1)?, &read_function(&fn2)?, strategy.as_ref())
        }
        Command::ReduceCheck { input } => {
            let (a, k1) = read_json::<ReductionJson>(&input)?.build()?;
            cli::reduce_check(&a, &k1)
        }
        Command::Decompose { realization, alpha } => {
            let r = read_json::<RealizationJson>(&realization)?.build()?;
            cli::decompose(&r, &scalar_arg(&alpha)?)
        }
        Command::Prop8 { params } => {
            let p = match params {
                Some(path) => read_json::<Prop8Json>(&path)?.params()?,
                None => cli::default_prop8_params(),
            };
            cli::prop8(p)
        }
        Command::Kersym { function } => cli::kersym(&read_function(&function)?),
    }
}

fn emit(report: &Report, human: bool) {
    let text = if human { report.summary.clone() } else { serde_json::to_string_pretty(&report.json).expect("reports serialize") };
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(args.command) {
        Ok(report) => {
            emit(&report, args.human);
            ExitCode::SUCCESS
        }
        Err(err) => {
            if let CliError::Disagreement(report) = &err {
                emit(report, args.human);
            }
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
