mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Debug, Parser)]
#[command(name = "channel-space", version, about = "Decoding cones and decoding distances for discrete memoryless channels")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieMode {
    Exact,
    Epsilon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct Global {
    /// How close two entries must be to count as tied.
    #[arg(long, global = true, value_enum, default_value_t = TieMode::Exact)]
    tie_rule: TieMode,
    /// Tie tolerance for `--tie-rule epsilon`, e.g. `1/100` or `0.01`.
    #[arg(long, global = true)]
    epsilon: Option<String>,
    /// `uniform` or a comma-separated input distribution such as `1/2,1/4,1/4`.
    #[arg(long, global = true, default_value = "uniform")]
    prior: String,
    #[arg(long, global = true, env = "CHANNEL_SPACE_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads for enumeration and sampling. Results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Accept channel rows whose sums are within this distance of 1.
    #[arg(long, global = true)]
    tolerance: Option<String>,
    /// Rescale each channel row to sum to 1 instead of rejecting it.
    #[arg(long, global = true)]
    normalize: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the weak-order matrix of a channel (or any non-negative grid).
    Order { file: std::path::PathBuf },
    /// Decoding distance between two rankings given in rank order, e.g. `3,1,2`.
    DistPerm {
        sigma: String,
        phi: String,
        /// Recount agreements by enumerating every code.
        #[arg(long)]
        oracle: bool,
    },
    /// Radial decoding distance from channel P (the true channel) to Q.
    DistChannel {
        p: std::path::PathBuf,
        q: std::path::PathBuf,
        #[arg(long)]
        oracle: bool,
        /// Also report the unweighted distance over all codes and outputs.
        #[arg(long)]
        global: bool,
    },
    /// Enumerate the decoding cones (weak orders) on n inputs.
    Cones {
        n: usize,
        /// Print only the counts by dimension.
        #[arg(long)]
        summary: bool,
    },
    /// Run verification checks against the enumeration oracle.
    Verify {
        /// Comma-separated check names; all checks when omitted.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        #[arg(long, default_value_t = 4)]
        exhaustive_n: usize,
        #[arg(long, default_value_t = 200)]
        random_pairs: usize,
        #[arg(long, default_value_t = 100)]
        random_channels: usize,
        #[arg(long, default_value_t = 20)]
        mc_pairs: usize,
        #[arg(long, default_value_t = 100_000)]
        mc_samples: u64,
    },
    /// Monte Carlo estimate of the radial agreement probability.
    Simulate {
        p: std::path::PathBuf,
        q: std::path::PathBuf,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
}

/// Writes the report, ignoring a closed pipe (`channel-space ... | head`).
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(workers) = cli.global.workers {
        if workers == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(3);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .expect("global pool is configured once");
    }
    match commands::run(cli.command, &cli.global) {
        Ok(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(text)) => {
            emit(&text);
            ExitCode::from(2)
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
