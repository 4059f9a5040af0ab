use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(aoi::cli::run(std::env::args_os()))
}
