use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(opconvex_cli::run(std::env::args_os()) as u8)
}
