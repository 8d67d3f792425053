use std::io;
use std::process::ExitCode;

use clap::Parser;
use timesub_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("timesub: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
