use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let report = hyperfuse::cli::run_cli(std::env::args_os());
    let _ = std::io::stdout().write_all(report.stdout.as_bytes());
    let _ = std::io::stderr().write_all(report.stderr.as_bytes());
    ExitCode::from(report.code as u8)
}
