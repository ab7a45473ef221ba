use std::process::ExitCode;

fn main() -> ExitCode {
    polyconj::cli::run()
}
