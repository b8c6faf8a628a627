use clap::Parser;
use mmo_cli::{cli, spec};
use std::process::ExitCode;

/// Exit codes: 0 success, 1 data error (unreadable or inconsistent inputs),
/// 2 usage error (the command line cannot describe a valid experiment).
fn main() -> ExitCode {
    let parsed = match cli::Cli::try_parse() {
        Ok(parsed) => parsed,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli::dispatch(parsed) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) if err.is::<spec::UsageError>() => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
