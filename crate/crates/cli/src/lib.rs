//! Command-line front end for the exact-verification toolkit.
//!
//! Every command produces a JSON report (optionally written to a file via
//! `--json`) and a human-readable text rendering of the same data on stdout.
//! Exit codes: 0 when every performed check passed, 1 when a check failed
//! (the first counterexample is part of the report), 2 on malformed input.

pub mod cli;
pub mod commands;
pub mod report;
pub mod schema;

use clap::Parser;

use crate::cli::{AlgebraCommand, Cli, Command, GroupCommand};
use crate::commands::{CmdError, CmdOutput};

/// Runs one parsed invocation and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let (result, json_path) = match cli.command {
        Command::Verify { p, json } => (commands::verify(p), json),
        Command::Algebra(AlgebraCommand::Check { file, json }) => {
            (commands::algebra_check(&file), json)
        }
        Command::Group(GroupCommand::Selftest { p, trials, seed, json }) => {
            (commands::group_selftest(p, trials, seed), json)
        }
        Command::Ball {
            preset,
            radius,
            p,
            modulus,
            compare,
            max_radius_override,
            json,
        } => (
            commands::ball(&preset, radius, p, modulus, compare.as_deref(), max_radius_override),
            json,
        ),
    };
    finish(result, json_path)
}

fn finish(result: Result<CmdOutput, CmdError>, json_path: Option<std::path::PathBuf>) -> i32 {
    match result {
        Ok(out) => {
            print!("{}", out.text);
            if let Some(path) = json_path {
                let payload = format!("{}\n", out.json);
                if let Err(e) = std::fs::write(&path, payload) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            if out.passed {
                0
            } else {
                1
            }
        }
        Err(CmdError::Input(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

/// Parses process arguments and runs. Clap's own usage errors exit with 2.
pub fn run_from_args() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Keep help/version on stdout with exit 0; report usage errors on
            // stderr with the malformed-input code.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    run(cli)
}
