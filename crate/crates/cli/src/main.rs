use clap::Parser;
use olab_cli::{run, write_report, Cli};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("olab: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let wall = start.elapsed().as_secs_f64();
    let dir = cli
        .global
        .out
        .clone()
        .or_else(|| report.config_out.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    match write_report(&report, &dir, wall) {
        Ok(_) => {
            print!("{}", report.stdout);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("olab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
