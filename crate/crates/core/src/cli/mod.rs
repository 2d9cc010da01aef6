//! The `hasts` command-line front end.
//!
//! Exit codes: 0 success, 1 domain failure (unsuitable mesh, solver
//! failure), 2 input, parse or configuration failure.

mod commands;
mod config;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use config::{Benchmark, Cli, Command, FileConfig, Flags, RunConfig};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io(_) | Error::Config(_) | Error::MalformedMesh(_) => EXIT_INPUT,
        _ => EXIT_DOMAIN,
    }
}

/// Runs one command, writing the report to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    let result = RunConfig::resolve(cli.command, cli.flags).and_then(|cfg| commands::dispatch(&cfg, out));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
