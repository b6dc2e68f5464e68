mod args;
mod commands;
mod outcome;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::{Cli, Command};
use commands::SubloopFilter;
use moufang::Limits;
use outcome::{CommandOutcome, Status};

fn run(cli: Cli) -> CommandOutcome {
    let limits = cli.bound.map_or_else(Limits::default, Limits::with_enumeration_bound);
    match &cli.command {
        Command::Verify(a) => commands::verify(&a.file),
        Command::Identities { file, exponents, inner } => commands::identities(file, exponents, *inner, &limits),
        Command::Series { file, kind } => commands::series(file, *kind),
        Command::Subloops { file, normal_only, nonassociative_only } => {
            let filter = match (normal_only, nonassociative_only) {
                (true, _) => SubloopFilter::Normal,
                (_, true) => SubloopFilter::NonAssociative,
                _ => SubloopFilter::All,
            };
            commands::subloops(file, filter, &limits)
        }
        Command::Decompose { file, quotient_out } => commands::decompose(file, quotient_out.as_deref()),
        Command::Theorems(a) => commands::theorems(&a.file, &limits),
        Command::Make { construction, output } => commands::make(construction, output),
        Command::ClassifySymbolic { d, k } => commands::classify_symbolic(*d, k, &limits),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let outcome = CommandOutcome::new(
                "usage",
                Status::InputError,
                json!({ "error": e.kind().to_string() }),
                e.render().to_string(),
            );
            return outcome.emit();
        }
    };
    run(cli).emit()
}
