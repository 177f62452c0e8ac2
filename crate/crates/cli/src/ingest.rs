//! Reading lifetimes from flat text files.

use std::fs;
use std::path::{Path, PathBuf};

use mttf_trend::{Error as SampleError, Sample};

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("cannot read {}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}, token {token}: cannot parse '{text}' as a number")]
    Parse {
        line: usize,
        token: usize,
        text: String,
    },
    #[error("line {line}, token {token}: {error}")]
    Invalid {
        line: usize,
        token: usize,
        error: SampleError,
    },
    #[error("no lifetimes found")]
    Empty,
}

/// Reads a sample from `path`; see [`parse_lifetimes`] for the format.
pub fn ingest_lifetimes(path: &Path) -> Result<Sample, IngestError> {
    let text = fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_lifetimes(&text)
}

/// Numbers separated by whitespace and/or commas, any count per line.
/// Lines whose first non-blank character is `#` are skipped. Line and token
/// positions in errors are 1-based.
pub fn parse_lifetimes(text: &str) -> Result<Sample, IngestError> {
    let mut values = Vec::new();
    let mut origin = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        if raw.trim_start().starts_with('#') {
            continue;
        }
        let tokens = raw
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty());
        for (ti, tok) in tokens.enumerate() {
            let (line, token) = (li + 1, ti + 1);
            let x: f64 = tok.parse().map_err(|_| IngestError::Parse {
                line,
                token,
                text: tok.to_string(),
            })?;
            values.push(x);
            origin.push((line, token));
        }
    }
    if values.is_empty() {
        return Err(IngestError::Empty);
    }
    Sample::new(values).map_err(|error| {
        let index = match error {
            SampleError::NonPositive { index, .. } | SampleError::NonFinite { index, .. } => index,
            _ => 0,
        };
        let (line, token) = origin[index];
        IngestError::Invalid { line, token, error }
    })
}
