use std::io::Write;
use std::process::ExitCode;

use ec_designs::cli::{configure_threads, run_command};

fn main() -> ExitCode {
    configure_threads();
    let outcome = run_command(std::env::args_os());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(outcome.exit_code as u8)
}
