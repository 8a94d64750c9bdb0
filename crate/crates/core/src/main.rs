use std::process::ExitCode;

fn main() -> ExitCode {
    squeeze_lab::harness::cli::main_with_args(std::env::args_os())
}
