//! Command-line front end emitting CSV or JSON tables.

mod commands;
mod envelope;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dicke_lift::entanglement::BipartiteMeasure;

use commands::SourceKind;
use envelope::{write_atomic, Format};

#[derive(Parser, Debug)]
#[command(
    name = "dicke-lift",
    version,
    about = "Heralded Dicke-state production from entangled pair sources"
)]
struct Cli {
    /// Output format (simulate defaults to json, everything else to csv).
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Write to PATH atomically instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Success probability at one source weight or over a sweep.
    Prob {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(
            long = "A",
            value_name = "A",
            required_unless_present = "sweep",
            conflicts_with = "sweep"
        )]
        weight: Option<f64>,
        #[arg(long, num_args = 3, value_names = ["A_START", "A_END", "STEPS"], allow_negative_numbers = true)]
        sweep: Option<Vec<f64>>,
    },
    /// Optimal source weights for each n in a range.
    Bifurcation {
        #[arg(long)]
        k: usize,
        #[arg(long, num_args = 2, value_names = ["N_MIN", "N_MAX"], required = true)]
        n: Vec<usize>,
    },
    /// Success probability against n for a fixed excitation number.
    Decay {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n_max: usize,
        /// First n of the table (default 2k+1).
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long, value_enum)]
        source: SourceKind,
    },
    /// Seeded Monte Carlo runs of the heralding protocol.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long = "A", value_name = "A")]
        weight: f64,
        #[arg(long)]
        runs: u64,
        /// Decimal or 0x-prefixed hexadecimal.
        #[arg(long, value_parser = parse_seed)]
        seed: u64,
    },
    /// Source against Dicke-qubit entanglement at the optimal source.
    Entanglement {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_measure)]
        measure: BipartiteMeasure,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid 64-bit seed {s:?}: {e}"))
}

fn parse_measure(s: &str) -> Result<BipartiteMeasure, String> {
    s.parse().map_err(|e: dicke_lift::Error| e.to_string())
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments; exit code 2.
    Usage(String),
    /// Anything else; exit code 1.
    Internal(String),
}

impl From<dicke_lift::Error> for CliError {
    fn from(e: dicke_lift::Error) -> Self {
        match e {
            dicke_lift::Error::Domain(_) | dicke_lift::Error::Capacity { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Internal(other.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (envelope, default_format) = match cli.command {
        Command::Prob {
            n,
            k,
            weight,
            sweep,
        } => match (weight, sweep.as_deref()) {
            (Some(a), None) => (commands::prob(n, k, a)?, Format::Csv),
            (None, Some(&[start, end, steps])) => {
                (commands::prob_sweep(n, k, start, end, steps)?, Format::Csv)
            }
            _ => return Err(CliError::Usage("give exactly one of --A or --sweep".into())),
        },
        Command::Bifurcation { k, n } => (commands::bifurcation(k, n[0], n[1])?, Format::Csv),
        Command::Decay {
            k,
            n_max,
            n_min,
            source,
        } => (commands::decay(k, n_min, n_max, source)?, Format::Csv),
        Command::Simulate {
            n,
            weight,
            runs,
            seed,
        } => (commands::simulate(n, weight, runs, seed)?, Format::Json),
        Command::Entanglement { n, k, measure } => {
            (commands::entanglement(n, k, measure)?, Format::Csv)
        }
    };
    let timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let text = envelope.render(cli.format.unwrap_or(default_format), &timestamp);
    match cli.output {
        Some(path) => write_atomic(&path, &text)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Internal(format!("cannot write to stdout: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
