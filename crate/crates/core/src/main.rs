use std::process::ExitCode;

fn main() -> ExitCode {
    boxcong::cli::run()
}
