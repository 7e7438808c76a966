//! Line-delimited JSON: one object per line, blank lines ignored.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::{Error, Result};

pub fn read<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse(BufReader::new(file), path)
}

/// Parses records from a reader; `path` only labels errors.
pub fn parse<T: DeserializeOwned>(reader: impl BufRead, path: &Path) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(record);
    }
    Ok(out)
}

pub fn write<'a, T: Serialize + 'a>(path: &Path, records: impl IntoIterator<Item = &'a T>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for r in records {
        append_to(&mut w, r, path)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes one record and a newline.
pub fn append_to<T: Serialize>(w: &mut impl Write, record: &T, path: &Path) -> Result<()> {
    serde_json::to_writer(&mut *w, record).map_err(|e| Error::Json { path: path.to_path_buf(), source: e })?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))
}
