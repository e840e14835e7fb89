use std::process::ExitCode;

fn main() -> ExitCode {
    codebounds::cli::main()
}
