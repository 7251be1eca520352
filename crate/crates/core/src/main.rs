use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(recoil_slits::cli::run(std::env::args_os()))
}
