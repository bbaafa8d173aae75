use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hodge_core::arith::{int, parse_rational};
use hodge_core::job::{run, Command, RunOptions};
use hodge_core::parse::parse_job;
use hodge_core::Error;

#[derive(Parser)]
#[command(name = "qhodge", version, about = "Bernstein-Sato polynomials and Hodge filtrations of f^(-alpha)")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Overrides k_max from the job file.
    #[arg(long, global = true)]
    k: Option<u32>,

    /// Multiplies the dt-order and pole fields of the oracle budget.
    #[arg(long, default_value_t = 1, global = true)]
    budget_scale: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bernstein-Sato polynomial, roots and certificate
    Bs { file: PathBuf },
    /// Annihilators of f^s and their symbols
    Ann { file: PathBuf },
    /// Gamma ∩ O and the Newton candidates
    Hodge0 { file: PathBuf },
    /// Hodge steps k = 0..k_max with cross-route checks
    Hodge { file: PathBuf },
    /// Hypotheses only
    Check { file: PathBuf },
    /// Identity checks on the truncated graph module
    Verify {
        file: PathBuf,
        #[arg(long)]
        selector: Option<String>,
    },
    /// Newton multiplier ideal of f^c
    Multiplier {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (file, command) = match cli.command {
        Cmd::Bs { file } => (file, Ok(Command::Bs)),
        Cmd::Ann { file } => (file, Ok(Command::Ann)),
        Cmd::Hodge0 { file } => (file, Ok(Command::Hodge0)),
        Cmd::Hodge { file } => (file, Ok(Command::Hodge)),
        Cmd::Check { file } => (file, Ok(Command::Check)),
        Cmd::Verify { file, selector } => (file, Ok(Command::Verify { selector })),
        Cmd::Multiplier { file, c } => {
            let cmd = match parse_rational(&c) {
                Some(c) if c >= int(0) => Ok(Command::Multiplier { c }),
                _ => Err(Error::Config(format!("--c expects a nonnegative rational, got `{c}`"))),
            };
            (file, cmd)
        }
    };
    let config = std::fs::read_to_string(&file)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", file.display())))
        .and_then(|text| parse_job(&text));
    let (config, command) = match (config, command) {
        (Ok(c), Ok(cmd)) => (c, cmd),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("qhodge: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let opts = RunOptions { k: cli.k, budget_scale: cli.budget_scale };
    let outcome = run(&command, &config, &opts);
    let text = match cli.format {
        Format::Text => outcome.report.render_text(),
        Format::Json => outcome.report.render_json(),
    };
    print!("{text}");
    if let Some(e) = &outcome.error {
        eprintln!("qhodge: {e}");
    }
    ExitCode::from(outcome.exit_code() as u8)
}
