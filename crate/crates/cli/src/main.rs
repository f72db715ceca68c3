use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use weakval_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = execute(&cli, &mut stdout.lock(), &mut stderr.lock());
    let _ = io::stdout().flush();
    ExitCode::from(code)
}
