use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use maxcorr_cli::{run, Cli, EXIT_CHECK_FAILED, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let path = cli.output.clone();
    let result = run(cli).and_then(|out| {
        match &path {
            Some(p) => std::fs::write(p, &out.body)?,
            None => std::io::stdout().lock().write_all(out.body.as_bytes())?,
        }
        Ok(out.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
