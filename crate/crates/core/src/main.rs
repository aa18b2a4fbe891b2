use std::process::ExitCode;

use clap::Parser;
use pbs::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut err = std::io::stderr();
    ExitCode::from(run(&cli, &mut out, &mut err))
}
