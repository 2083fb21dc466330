mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use config::Config;
use output::{emit, Format};

#[derive(Parser, Debug)]
#[command(name = "etaq", version, about = "Eta-quotients: enumeration, q-expansions, dimensions and checks")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,

    /// `key = value` defaults for `terms`, `kmax` and `primes`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CharacterArg {
    Trivial,
    Quadratic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the holomorphic eta-quotients of a level and weight.
    Enumerate {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        weight: i64,
        /// Check the level-8 or level-4p family member instead.
        #[arg(long)]
        family: bool,
    },
    /// q-expansion of an eta-quotient given as `delta:r,...`.
    Qexp {
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
        /// Number of coefficients, starting at the leading exponent.
        #[arg(long)]
        terms: Option<usize>,
        /// Level; defaults to the lcm of the listed divisors.
        #[arg(long)]
        level: Option<u64>,
    },
    /// Dimensions of cusp and Eisenstein spaces.
    Dims {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        weight: i64,
        #[arg(long, value_enum, default_value = "trivial")]
        character: CharacterArg,
    },
    /// Closed-form counts at prime level.
    Count {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        weight: i64,
    },
    /// Enumerate, then check linear independence up to the Sturm bound.
    Verify {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        weight: i64,
    },
    /// Span ratios for every admissible weight up to `kmax`.
    Ratio {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        kmax: Option<i64>,
    },
    /// Raise a non-integral point of the prime-level line to an integral quotient.
    Lift {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        weight: i64,
        /// Order of vanishing at infinity.
        #[arg(long)]
        v1: i64,
    },
    /// Grid of counts, dimensions, ratios and ranks.
    Sweep {
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        #[arg(long)]
        kmax: Option<i64>,
    },
}

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("ETAQ_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("ETAQ_THREADS must be a positive integer, got `{raw}`"))?;
    if n == 0 {
        return Err("ETAQ_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn params(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn run(cli: Cli) -> Result<bool, String> {
    init_threads()?;
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let (name, params, out) = match cli.command {
        Command::Enumerate { level, weight, family } => (
            "enumerate",
            params(&[("level", json!(level)), ("weight", json!(weight)), ("family", json!(family))]),
            commands::enumerate_cmd(level, weight, family)?,
        ),
        Command::Qexp { eta, terms, level } => {
            let terms = terms.unwrap_or(config.terms);
            (
                "qexp",
                params(&[("eta", json!(eta)), ("terms", json!(terms)), ("level", json!(level))]),
                commands::qexp_cmd(&eta, level, terms)?,
            )
        }
        Command::Dims { level, weight, character } => {
            let quadratic = character == CharacterArg::Quadratic;
            let tag = if quadratic { "quadratic" } else { "trivial" };
            (
                "dims",
                params(&[("level", json!(level)), ("weight", json!(weight)), ("character", json!(tag))]),
                commands::dims_cmd(level, weight, quadratic)?,
            )
        }
        Command::Count { prime, weight } => (
            "count",
            params(&[("prime", json!(prime)), ("weight", json!(weight))]),
            commands::count_cmd(prime, weight)?,
        ),
        Command::Verify { level, weight } => (
            "verify",
            params(&[("level", json!(level)), ("weight", json!(weight))]),
            commands::verify_cmd(level, weight)?,
        ),
        Command::Ratio { prime, kmax } => {
            let kmax = kmax.unwrap_or(config.kmax);
            (
                "ratio",
                params(&[("prime", json!(prime)), ("kmax", json!(kmax))]),
                commands::ratio_cmd(prime, kmax)?,
            )
        }
        Command::Lift { prime, weight, v1 } => (
            "lift",
            params(&[("prime", json!(prime)), ("weight", json!(weight)), ("v1", json!(v1))]),
            commands::lift_cmd(prime, weight, v1)?,
        ),
        Command::Sweep { primes, kmax } => {
            let primes = primes.unwrap_or_else(|| config.primes.clone());
            let kmax = kmax.unwrap_or(config.kmax);
            (
                "sweep",
                params(&[("primes", json!(primes)), ("kmax", json!(kmax))]),
                commands::sweep_cmd(&primes, kmax)?,
            )
        }
    };
    emit(cli.format, name, params, &out).map_err(|e| e.to_string())?;
    Ok(!out.failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
