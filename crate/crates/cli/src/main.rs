mod args;
mod run;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use run::Outcome;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::dispatch(&cli.command) {
        Ok(outcome) => {
            let (value, ok) = match outcome {
                Outcome::Value(v) => (v, true),
                Outcome::Report { json, passed } => (json, passed),
            };
            let text = if cli.pretty {
                serde_json::to_string_pretty(&value)
            } else {
                serde_json::to_string(&value)
            }
            .expect("JSON values always serialize");
            println!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
