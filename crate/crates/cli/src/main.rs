use std::process::ExitCode;

use clap::Parser;
use sobolev_trace_cli::{run, JobSpec};

fn main() -> ExitCode {
    let job = JobSpec::parse();
    match run(&job) {
        Ok(paths) => {
            for path in paths {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.status() as u8)
        }
    }
}
