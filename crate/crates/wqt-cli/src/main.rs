use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(wqt_cli::cli::main_entry())
}
