use std::process::ExitCode;

fn main() -> ExitCode {
    ellrank::cli::main_entry()
}
