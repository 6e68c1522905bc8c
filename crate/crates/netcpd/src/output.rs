//! Verdict streams and result files.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use netcpd_core::detector::ChangeVerdict;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Jsonl,
    Csv,
}

pub fn parse_format(name: &str) -> Result<OutputFormat, String> {
    match name {
        "jsonl" => Ok(OutputFormat::Jsonl),
        "csv" => Ok(OutputFormat::Csv),
        other => Err(format!("unknown format {other:?} (expected jsonl or csv)")),
    }
}

/// Stdout or a file; creation failures are the user's path problem.
pub fn open_sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match path {
        None => Ok(Box::new(std::io::stdout())),
        Some(p) => File::create(p)
            .map(|f| Box::new(f) as Box<dyn Write>)
            .map_err(|e| CliError::Input(format!("cannot create {}: {e}", p.display()))),
    }
}

/// Writes one verdict per line (JSON object or CSV row), flushing after each
/// so downstream consumers see a verdict as soon as it is decided.
pub enum VerdictWriter<W: Write> {
    Jsonl(W),
    Csv(csv::Writer<W>),
}

impl<W: Write> VerdictWriter<W> {
    pub fn new(format: OutputFormat, sink: W) -> Self {
        match format {
            OutputFormat::Jsonl => VerdictWriter::Jsonl(sink),
            OutputFormat::Csv => VerdictWriter::Csv(csv::Writer::from_writer(sink)),
        }
    }

    pub fn write(&mut self, verdict: &ChangeVerdict) -> Result<(), CliError> {
        match self {
            VerdictWriter::Jsonl(w) => {
                let line = serde_json::to_string(verdict)
                    .map_err(|e| CliError::Internal(format!("serializing verdict: {e}")))?;
                writeln!(w, "{line}").map_err(write_err)?;
                w.flush().map_err(write_err)
            }
            VerdictWriter::Csv(w) => {
                w.serialize(verdict)
                    .map_err(|e| CliError::Internal(format!("writing verdict: {e}")))?;
                w.flush().map_err(write_err)
            }
        }
    }
}

fn write_err(e: std::io::Error) -> CliError {
    CliError::Internal(format!("writing output: {e}"))
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut file = File::create(path)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", path.display())))?;
    serde_json::to_writer_pretty(&mut file, value)
        .map_err(|e| CliError::Internal(format!("writing {}: {e}", path.display())))?;
    file.write_all(b"\n").map_err(write_err)
}
