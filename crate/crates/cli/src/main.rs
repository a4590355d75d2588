mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Status;

const EXIT_NOT_FOUND: u8 = 1;
const EXIT_DATA_ERROR: u8 = 3;

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Image(cmd) => commands::image(cmd),
        Command::Dct(cmd) => commands::dct(cmd),
        Command::File(cmd) => commands::file(cmd),
        Command::Audio(cmd) => commands::audio(cmd),
        Command::Net(cmd) => commands::net(cmd, cli.seed),
        Command::Graph(cmd) => commands::graph(cmd, cli.seed),
        Command::Analyze(args) => commands::analyze(args),
    };
    match outcome {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::NothingFound) => ExitCode::from(EXIT_NOT_FOUND),
        Err(err) => {
            eprintln!("stegkit: {err}");
            if err.is_not_found() {
                ExitCode::from(EXIT_NOT_FOUND)
            } else {
                ExitCode::from(EXIT_DATA_ERROR)
            }
        }
    }
}
