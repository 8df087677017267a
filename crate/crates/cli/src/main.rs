use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use gmqd_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match gmqd_cli::run(&cli, &mut out) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
