use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = sixvertex_cli::run(std::env::args_os());
    let mut code = outcome.code;
    match &outcome.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.stdout) {
                eprintln!("error: cannot write {}: {e}", path.display());
                code = sixvertex_cli::app::EXIT_FAILURE;
            }
        }
        None => {
            let _ = std::io::stdout().lock().write_all(outcome.stdout.as_bytes());
        }
    }
    let _ = std::io::stderr().lock().write_all(outcome.stderr.as_bytes());
    ExitCode::from(code as u8)
}
