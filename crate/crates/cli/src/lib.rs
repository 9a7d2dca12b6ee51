//! Command-line front end: distributions, figure data, simulation and the
//! verification suite, written as CSV or JSON.
//!
//! Exit codes: 0 success, 1 numeric failure (or a failed verify check),
//! 2 usage error.

pub mod args;
mod commands;
pub mod rates;
pub mod report;
mod verify;

use std::io::Write;
use std::path::Path;

use args::{Command, Format};
pub use args::parse_args;
pub use rates::parse_rates;
pub use report::{parse_report, Report};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) => f.write_str(m),
        }
    }
}

impl From<fraccount::Error> for CliError {
    fn from(e: fraccount::Error) -> Self {
        match e {
            fraccount::Error::Domain(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

fn check_threads_env() -> Result<(), CliError> {
    match std::env::var("FRACCOUNT_THREADS") {
        Ok(v) if !matches!(v.trim().parse::<usize>(), Ok(n) if n > 0) => {
            Err(CliError::Usage(format!("FRACCOUNT_THREADS must be a positive integer, got {v:?}")))
        }
        _ => Ok(()),
    }
}

/// Writes `text` to `path` through a temporary file in the same directory.
fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code. Results go to `stdout` unless `--output` names a file.
pub fn run_cli<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match parse_args(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let outcome = check_threads_env().and_then(|()| commands::execute(&cli.command));
    let report = match outcome {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let text = match cli.output.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    let written = match &cli.output.output {
        Some(path) => write_atomic(path, &text),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return 1;
    }
    if matches!(cli.command, Command::Verify { .. }) {
        let failed = verify::failures(&report);
        if failed > 0 {
            let _ = writeln!(stderr, "{failed} check(s) failed");
            return 1;
        }
    }
    0
}
