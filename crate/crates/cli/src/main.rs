use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

mod args;
mod run;

use args::Cli;

/// Usage errors and library errors share exit code 3.
const EXIT_ERROR: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_ERROR,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    match run::run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            if json {
                let v = serde_json::json!({"error": {"kind": e.kind(), "message": e.to_string()}});
                println!("{v}");
            } else {
                eprintln!("error[{}]: {e}", e.kind());
            }
            ExitCode::from(EXIT_ERROR)
        }
    }
}
