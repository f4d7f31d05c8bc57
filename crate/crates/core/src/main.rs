use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(tangent_curves::cli::main_with_args(std::env::args()))
}
