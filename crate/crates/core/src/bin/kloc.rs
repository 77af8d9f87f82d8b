use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = kloc::cli::run(std::env::args_os(), &mut std::io::stdin().lock());
    std::io::stdout().write_all(outcome.stdout.as_bytes()).ok();
    std::io::stderr().write_all(outcome.stderr.as_bytes()).ok();
    ExitCode::from(outcome.code as u8)
}
