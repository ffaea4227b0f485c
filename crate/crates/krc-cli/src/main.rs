use std::process::ExitCode;

fn main() -> ExitCode {
    let out = krc_cli::run(std::env::args().skip(1));
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
