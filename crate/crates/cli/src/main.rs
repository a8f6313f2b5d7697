use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use tanint_cli::{run, Cli};

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let code = run(&cli, &mut out, &mut stderr.lock());
    let _ = out.flush();
    ExitCode::from(code as u8)
}
