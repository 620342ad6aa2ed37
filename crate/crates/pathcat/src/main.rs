use std::process::ExitCode;

fn main() -> ExitCode {
    pathcat::cli::main()
}
