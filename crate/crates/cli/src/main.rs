use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = fidsolve_cli::run_cli(std::env::args_os(), &mut io::stdin().lock());
    // Broken pipes on either stream are not worth a panic.
    let _ = io::stdout().write_all(out.stdout.as_bytes());
    let _ = io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code)
}
