mod report;
mod run;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

/// Model checker for epistemic process calculus models and ATLE formulas.
///
/// Exit status: 0 when every verdict was computed (true or false), 1 when
/// a limit stopped the run, 2 on unreadable, malformed or invalid input.
#[derive(Debug, Parser)]
#[command(name = "epc-check", version)]
pub struct Args {
    /// Model file (`.epc`).
    pub model: PathBuf,

    /// A formula, or a file with one formula per line. Repeatable.
    #[arg(short = 'f', long = "formulas", value_name = "FORMULA|FILE")]
    pub formulas: Vec<String>,

    /// Evaluate at `STATE` or, for explicit-mode models, `STATE:TERM`
    /// instead of the declared initial configuration.
    #[arg(long, value_name = "STATE[:TERM]")]
    pub init: Option<String>,

    #[arg(long, default_value_t = 100_000)]
    pub max_configs: usize,

    /// Coalition operators with more partial strategies than this fail.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_strategies: u128,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Print the configuration graph as `N` and `E` lines.
    #[arg(long)]
    pub dump_graph: bool,

    /// Print the indistinguishability classes of a comma-separated coalition.
    #[arg(long, value_name = "AGENTS")]
    pub dump_epistemic: Option<String>,

    /// Worker threads for strategy enumeration.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run::run(&args, &mut out) {
        Ok(()) => {
            let _ = out.flush();
            ExitCode::SUCCESS
        }
        Err(failure) => {
            let _ = out.flush();
            eprintln!("epc-check: {}", failure.message);
            ExitCode::from(failure.kind.code())
        }
    }
}
