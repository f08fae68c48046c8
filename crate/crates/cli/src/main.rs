use std::io::Write;
use std::process;

use chsh_cli::{run, Cli, ExitCode, Failure};
use clap::error::ErrorKind;
use clap::Parser;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::Success,
                // clap would use 2 here, which is reserved for validation.
                _ => ExitCode::Parse,
            };
            process::exit(code.code());
        }
    };

    let code = match run(&cli).and_then(|outcome| emit(&cli, outcome)) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {f}");
            f.code
        }
    };
    process::exit(code.code());
}

/// Writes the report to `--output` (or stdout for "-") and the summary to
/// stdout, or to stderr when stdout carries the report.
fn emit(cli: &Cli, outcome: chsh_cli::Outcome) -> Result<ExitCode, Failure> {
    let io_err = |e: std::io::Error| Failure::io(e.to_string());
    match cli.output.as_deref() {
        Some(p) if p.as_os_str() == "-" => {
            eprint!("{}", outcome.summary);
            std::io::stdout()
                .write_all(outcome.report.as_bytes())
                .map_err(io_err)?;
        }
        Some(p) => {
            std::fs::write(p, &outcome.report)
                .map_err(|e| Failure::io(format!("cannot write {}: {e}", p.display())))?;
            print!("{}", outcome.summary);
        }
        None => print!("{}", outcome.summary),
    }
    Ok(outcome.code)
}
