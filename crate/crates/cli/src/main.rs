use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use catmeas_cli::{exit, parse_model, run, Format, Options, COMMANDS};
use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

/// Exact verifier for finitely additive measures, sheaves and cosheaves on
/// finite Boolean algebras.
#[derive(Debug, Parser)]
#[command(name = "catmeas", version, after_help = after_help())]
struct Cli {
    /// One of the commands listed below.
    command: String,
    /// Model file (JSON).
    #[arg(long)]
    model: PathBuf,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Check every partition instead of binary ones.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Element as an atom-set expression, e.g. `a | b`, `{a,c}`, `top - a`.
    #[arg(long)]
    element: Option<String>,
    /// Append wall-clock timing (makes output run-dependent).
    #[arg(long)]
    timing: bool,
}

fn after_help() -> String {
    format!("Commands: {}\nExit codes: 0 success, 1 verification failure, 2 input error.", COMMANDS.join(", "))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let model = match parse_model(&cli.model) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("{}: {e}", cli.model.display());
            return ExitCode::from(exit::INPUT_ERROR as u8);
        }
    };
    let opts = Options { seed: cli.seed, exhaustive: cli.exhaustive, element: cli.element.clone() };
    let mut report = match run(&cli.command, &model, &cli.model.display().to_string(), &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit::INPUT_ERROR as u8);
        }
    };
    if cli.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis());
    }
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Structured => Format::Structured,
    };
    print!("{}", report.render(format));
    if report.passed() {
        ExitCode::from(exit::SUCCESS as u8)
    } else {
        ExitCode::from(exit::VERIFICATION_FAILED as u8)
    }
}
