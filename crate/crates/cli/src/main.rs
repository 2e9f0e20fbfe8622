use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = quadsg_cli::run_args(std::env::args_os());
    if let Some(text) = &outcome.output {
        match &outcome.out {
            Some(p) => {
                if let Err(e) = std::fs::write(p, text) {
                    eprintln!("{}: {e}", p.display());
                    return ExitCode::from(2);
                }
            }
            None => {
                let _ = std::io::stdout().write_all(text.as_bytes());
            }
        }
    }
    if let Some(e) = &outcome.error {
        eprintln!("{e}");
    }
    ExitCode::from(outcome.code as u8)
}
