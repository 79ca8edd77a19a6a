use std::process::ExitCode;

use clap::Parser;
use hosb_cli::cli::{Cli, Command};
use hosb_cli::commands;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Generate(args) => commands::cmd_generate(args),
        Command::Reduce(args) => commands::cmd_reduce(args),
        Command::Solve(args) => commands::cmd_solve(args),
        Command::Bench(args) => commands::cmd_bench(args),
        Command::Fit(args) => commands::cmd_fit(args),
        Command::Oracle(args) => commands::cmd_oracle(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
