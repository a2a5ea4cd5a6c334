use std::process::ExitCode;

fn main() -> ExitCode {
    let code = subinv::cli::dispatch(std::env::args_os());
    ExitCode::from(code as u8)
}
