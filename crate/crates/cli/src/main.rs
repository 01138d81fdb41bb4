#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cli;
mod commands;
mod config;
mod failure;
mod run;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Estimate(args) => commands::estimate(args),
        Command::ValidateTable(args) => commands::validate_table(args),
        Command::InitTable => commands::init_table(),
        Command::InitMapping => commands::init_mapping(),
        Command::Transfer(args) => commands::transfer(args),
        Command::Calibrate(args) => commands::calibrate(args),
        Command::Evaluate(args) => commands::evaluate_cmd(args),
        Command::Case(args) => commands::case(args),
        Command::Report(args) => commands::report(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code)
        }
    }
}
