use std::process::ExitCode;

use clap::Parser;
use zetakit_cli::commands::run;
use zetakit_cli::config::{Cli, Format};
use zetakit_cli::render;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = match cli.global.format {
                Format::Json => report.to_json(),
                Format::Table => render::table(&serde_json::to_value(&report).expect("report serializes")),
            };
            let written = match &cli.global.output {
                Some(path) => std::fs::write(path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(report.verdict.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
