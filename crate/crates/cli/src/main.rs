//! `relsep`: runs one command from a TOML configuration and writes one
//! JSON report per line.

mod commands;
mod config;
mod report;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use commands::{Run, DEFAULT_BUDGET, DEFAULT_RADIUS};
use config::{schema, RunConfig, SchemaError};

const EXIT_OTHER: u8 = 1;
const EXIT_CHECK_FAILED: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_SCHEMA: u8 = 4;
const EXIT_UNSUPPORTED: u8 = 5;

#[derive(Debug, Parser)]
#[command(name = "relsep", version, about = "Relative Cayley graph and separability workbench")]
struct Cli {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Command to run; overrides `command` in the configuration.
    #[arg(long)]
    command: Option<String>,
    /// Seed for randomised searches; overrides `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Enumeration and search budget; overrides `params.budget`.
    #[arg(long, env = "RELSEP_BUDGET")]
    budget: Option<usize>,
    /// Enumeration radius; overrides `params.radius`.
    #[arg(long)]
    radius: Option<usize>,
    /// Write reports here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<SchemaError>().is_some() {
        return EXIT_SCHEMA;
    }
    match e.downcast_ref::<relsep::Error>() {
        Some(relsep::Error::Budget { .. }) => EXIT_BUDGET,
        Some(
            relsep::Error::FamilyMismatch(_)
            | relsep::Error::UnknownLetter(_)
            | relsep::Error::InvalidSpec(_)
            | relsep::Error::Precondition(_)
            | relsep::Error::InvalidPath(_),
        ) => EXIT_SCHEMA,
        Some(relsep::Error::WrongFamily { .. } | relsep::Error::Unsupported(_)) => EXIT_UNSUPPORTED,
        _ => EXIT_OTHER,
    }
}

fn execute(cli: &Cli) -> anyhow::Result<u8> {
    let text = fs::read_to_string(&cli.config).map_err(|e| schema(format!("{}: {e}", cli.config.display())))?;
    let cfg = RunConfig::parse(&text)?;
    // A command-line budget (or RELSEP_BUDGET) wins over the file.
    let budget = cli.budget.or(cfg.params.budget).unwrap_or(DEFAULT_BUDGET);
    let command = cli.command.clone().or_else(|| cfg.command.clone()).ok_or_else(|| schema("no command given"))?;
    let run = Run {
        command,
        seed: cli.seed.unwrap_or(cfg.seed),
        radius: cli.radius.or(cfg.params.radius).unwrap_or(DEFAULT_RADIUS),
        budget,
        cfg,
    };
    let reports = commands::run(&run)?;
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.line());
        text.push('\n');
    }
    match &cli.out {
        Some(path) => fs::write(path, &text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(if reports.iter().any(|r| r.failed()) { EXIT_CHECK_FAILED } else { 0 })
}

fn main() -> ExitCode {
    // Usage errors must not share clap's default code 2 with failed checks.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_SCHEMA } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("relsep: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
