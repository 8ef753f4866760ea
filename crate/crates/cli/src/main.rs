use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ellgen_cli::{run, Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match run(&cli) {
        Ok(out) => {
            let written = match cli.common.format {
                Format::Json => {
                    eprint!("{}", out.summary);
                    writeln!(stdout, "{}", out.report.to_json())
                }
                Format::Text => {
                    let mut text = out.summary;
                    for w in &out.report.warnings {
                        text.push_str(&format!("warning: {w}\n"));
                    }
                    write!(stdout, "{text}")
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(_) => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if cli.common.format == Format::Json {
                let doc = serde_json::to_string_pretty(&e.document()).expect("error document");
                let _ = writeln!(stdout, "{doc}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
