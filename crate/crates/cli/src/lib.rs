//! The `ppoly` command line: argument handling, the persistent value cache
//! and report output.

pub mod args;
pub mod cache;
pub mod commands;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Format};
use commands::{run_command, Context, Outcome, EXIT_ERROR};

fn write_to(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn emit(out: &Outcome, format: Format, output: Option<&Path>) -> io::Result<()> {
    let json = report::to_json_string(&out.json);
    match format {
        Format::Json => write_to(output, &json),
        Format::Csv => write_to(output, &out.csv),
        Format::Both => match output {
            Some(p) => {
                fs::write(p.with_extension("json"), &json)?;
                fs::write(p.with_extension("csv"), &out.csv)
            }
            None => write_to(None, &format!("{json}\n{}", out.csv)),
        },
    }
}

/// Runs the command line given by `argv` and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { 0 };
        }
    };
    let start = Instant::now();
    let result = Context::new(&cli.global).and_then(|ctx| run_command(&cli.command, &ctx));
    match result {
        Ok(out) => {
            if let Err(e) = emit(&out, cli.global.format, cli.global.output.as_deref()) {
                eprintln!("error: writing the report: {e}");
                return EXIT_ERROR;
            }
            eprintln!("elapsed {:.3}s", start.elapsed().as_secs_f64());
            out.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
