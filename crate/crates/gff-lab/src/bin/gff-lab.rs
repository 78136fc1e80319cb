use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(gff_lab::cli::main() as u8)
}
