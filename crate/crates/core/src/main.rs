use std::io::{stderr, stdout};
use std::process::ExitCode;

fn main() -> ExitCode {
    fractalis::cli::configure_threads();
    let code = fractalis::cli::run(std::env::args_os(), &mut stdout().lock(), &mut stderr().lock());
    ExitCode::from(code as u8)
}
