use std::io;
use std::process::ExitCode;

use clap::Parser;
use phytobase_server::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    tracing_subscriber::fmt().with_writer(io::stderr).init();
    let mut out = io::stdout().lock();
    match run(&cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("phytobase: {e}");
            ExitCode::from(1)
        }
    }
}
