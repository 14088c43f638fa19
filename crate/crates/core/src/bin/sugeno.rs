use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let max_grid = std::env::var(sugeno::cli::MAX_GRID_ENV).ok();
    let out = sugeno::cli::run(std::env::args_os(), max_grid.as_deref());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
