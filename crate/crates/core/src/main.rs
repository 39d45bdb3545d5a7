use std::process::ExitCode;

fn main() -> ExitCode {
    cocycle_lab::cli::run(std::env::args_os())
}
