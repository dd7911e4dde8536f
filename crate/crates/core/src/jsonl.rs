//! JSON-lines reading and writing.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonlError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("write failed: {0}")]
    Write(#[from] std::io::Error),
}

/// Non-blank lines with their 1-based line numbers.
pub fn lines<R: Read>(reader: R) -> Result<Vec<(usize, String)>, std::io::Error> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push((i + 1, line));
        }
    }
    Ok(out)
}

pub fn parse_line<T: DeserializeOwned>(line_no: usize, line: &str) -> Result<T, JsonlError> {
    serde_json::from_str(line).map_err(|source| JsonlError::Parse {
        line: line_no,
        source,
    })
}

pub fn read<T: DeserializeOwned, R: Read>(reader: R) -> Result<Vec<T>, JsonlError> {
    let lines = lines(reader).map_err(|source| JsonlError::Io {
        path: "<reader>".into(),
        source,
    })?;
    lines.iter().map(|(n, l)| parse_line(*n, l)).collect()
}

pub fn open(path: &Path) -> Result<File, JsonlError> {
    File::open(path).map_err(|source| JsonlError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_path<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, JsonlError> {
    read(open(path)?)
}

pub fn write<T: Serialize, W: Write>(writer: W, items: impl IntoIterator<Item = T>) -> Result<(), JsonlError> {
    let mut w = BufWriter::new(writer);
    for item in items {
        serde_json::to_writer(&mut w, &item).map_err(std::io::Error::from)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn create(path: &Path) -> Result<File, JsonlError> {
    File::create(path).map_err(|source| JsonlError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_path<T: Serialize>(path: &Path, items: impl IntoIterator<Item = T>) -> Result<(), JsonlError> {
    write(create(path)?, items)
}
