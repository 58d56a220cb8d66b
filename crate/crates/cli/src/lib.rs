//! Command-line front end: parses arguments, runs one experiment and writes
//! a CSV or JSON table.
//!
//! Exit codes: 0 on success, 1 on domain errors (including exhausted
//! budgets, after any partial rows are written), 2 on configuration errors.

pub mod args;
mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

pub use args::{Cli, Command, Format};
pub use output::{csv_body, Cell, Table};

/// Default directory for output files.
pub const OUT_DIR_ENV: &str = "CAYAUTO_OUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Domain(cayauto_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl From<cayauto_core::Error> for CliError {
    fn from(e: cayauto_core::Error) -> Self {
        use cayauto_core::Error as E;
        match e {
            E::InvalidArgument(_) | E::Parse { .. } | E::Io(_) | E::Json(_) | E::AlphabetMismatch(_) => {
                CliError::Config(e.to_string())
            }
            other => CliError::Domain(other),
        }
    }
}

/// What a command produced: the rendered document, and a nonzero exit
/// code with a message when the rows are partial or a check failed.
pub(crate) struct Outcome {
    pub text: String,
    pub code: i32,
    pub message: Option<String>,
}

impl Outcome {
    pub fn ok(text: String) -> Outcome {
        Outcome {
            text,
            code: 0,
            message: None,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let echo: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    run_config(&cli, &echo.join(" "), out, err)
}

/// Runs an already parsed configuration; `echo` is recorded in the
/// metadata header.
pub fn run_config(cli: &Cli, echo: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::execute(cli, echo)),
            Err(e) => Err(CliError::Config(format!("thread pool: {e}"))),
        },
        None => commands::execute(cli, echo),
    };
    match result {
        Ok(o) => {
            if let Err(e) = emit(cli, &o.text, out) {
                let _ = writeln!(err, "error: {e}");
                return e.exit_code();
            }
            if let Some(m) = o.message {
                let _ = writeln!(err, "{m}");
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(cli: &Cli, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let env_dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    let path = match (&cli.out, env_dir) {
        (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) if !text.is_empty() => {
            let ext = match cli.format {
                Format::Csv if !commands::always_json(&cli.command) => "csv",
                _ => "json",
            };
            Some(dir.join(format!("{}.{ext}", cli.command.name())))
        }
        (None, _) => None,
    };
    let io = |e: std::io::Error| CliError::Config(format!("cannot write output: {e}"));
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(io)?;
            }
            std::fs::write(&p, text).map_err(io)
        }
        None => out.write_all(text.as_bytes()).map_err(io),
    }
}
