//! `hmelas`: C-C distances, ball volumes, domain geometry, Dirichlet spectra of
//! the Heisenberg Laplacian and Melas-type bound reports from the command line.

mod args;
mod run;
mod table;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("hmelas: error: {first}");
            return ExitCode::from(1);
        }
    };
    match run::run(&cli) {
        Ok(run::Status::Ok) => ExitCode::SUCCESS,
        Ok(run::Status::BoundViolation) => ExitCode::from(2),
        Err(e) => {
            eprintln!("hmelas: error: {}", e.to_string().replace('\n', " "));
            ExitCode::from(1)
        }
    }
}
