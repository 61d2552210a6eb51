use std::process::ExitCode;

use clap::Parser;
use coloriso::cli::{error_status, run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((status, line)) => {
            if let Some(line) = line {
                println!("{line}");
            }
            status.into()
        }
        Err(e) => {
            eprintln!("error: {e}");
            error_status(&e).into()
        }
    }
}
