mod args;
mod commands;
mod config;

use std::ffi::OsString;
use std::fs;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

const EXIT_RUNTIME: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let mut argv: Vec<OsString> = std::env::args_os().collect();
    if let Some(path) = config::find_config(&argv) {
        let pairs = fs::read_to_string(path)
            .map_err(netgames::Error::from)
            .and_then(|text| config::parse(&text));
        match pairs {
            Ok(pairs) => argv = config::merge(argv, &pairs),
            Err(e) => {
                eprintln!("error: config {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::GenNetwork(a) => commands::gen_network(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Sweep(a) => commands::sweep_cmd(a),
        Command::Analyze(a) => commands::analyze(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
