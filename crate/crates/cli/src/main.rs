//! `xbicorr` binary: argument parsing, dispatch, and exit-status mapping.

mod cli;
mod emit;
mod report;
mod run;
mod tables;

use clap::Parser;

fn main() {
    let parsed = cli::Cli::parse();
    if let Err(failure) = run::execute(parsed) {
        eprintln!("xbicorr: {}", failure.message);
        std::process::exit(failure.code);
    }
}
