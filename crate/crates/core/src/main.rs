use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let env_tol = std::env::var(gaussmp::cli::TOL_ENV).ok();
    let code = gaussmp::cli::run(
        &argv,
        env_tol.as_deref(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
