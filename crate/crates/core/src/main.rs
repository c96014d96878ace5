use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = stabmatch::cli::run(std::env::args().skip(1));
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::io::stdout().flush().ok();
    ExitCode::from(out.code as u8)
}
