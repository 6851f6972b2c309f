mod commands;
mod output;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use output::emit;
use settings::{GlobalArgs, Settings};

/// Exact graded dimensions of diagram algebras, their cocenters and current-algebra Weyl modules.
#[derive(Parser)]
#[command(name = "cocenter", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Symmetric-function and bubble identity suites.
    Symcheck,
    /// Graded dimensions of KLR idempotent pieces.
    KlrDims,
    /// Graded Hom dimensions between objects of the tensor product algebra.
    TpaDims,
    /// Graded cocenter dimensions per weight.
    TraceDims,
    /// Graded character of the tensor product of local Weyl modules.
    WeylChar,
    /// Factorwise contravariant pairings of the listed objects.
    Shapovalov {
        #[arg(long)]
        pairs: PathBuf,
    },
    /// Compares cocenter dimensions with Weyl characters and runs every suite.
    Verify,
}

fn run(cli: Cli) -> Result<bool> {
    let s = Settings::resolve(&cli.global)?;
    match cli.command {
        Command::Symcheck => {
            let rows = commands::symcheck(&s);
            emit(&s, &rows, &rows)?;
            Ok(rows.iter().all(|r| r.passed))
        }
        Command::KlrDims => {
            let rows = commands::klr_dims(&s);
            emit(&s, &rows, &rows)?;
            Ok(true)
        }
        Command::TpaDims => {
            let rows = commands::tpa_dims(&s)?;
            emit(&s, &rows, &rows)?;
            Ok(true)
        }
        Command::TraceDims => {
            let rows = commands::trace_dims(&s)?;
            emit(&s, &rows, &rows)?;
            Ok(true)
        }
        Command::WeylChar => {
            let report = commands::weyl_char(&s)?;
            emit(&s, &report, &report.rows)?;
            Ok(true)
        }
        Command::Shapovalov { pairs } => {
            let rows = commands::shapovalov(&s, &pairs)?;
            emit(&s, &rows, &rows)?;
            Ok(true)
        }
        Command::Verify => {
            let report = commands::verify(&s)?;
            emit(&s, &report, &report.rows)?;
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<cocenter::Error>().is_some_and(|c| matches!(c, cocenter::Error::NotStabilized(_))) {
                eprintln!("hint: raise --max-degree or use smaller weights");
            }
            ExitCode::from(2)
        }
    }
}
