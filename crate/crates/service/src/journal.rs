//! Append-only JSON-lines files.

use std::fs::{File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::ServiceError;

#[derive(Debug)]
pub struct Journal {
    path: PathBuf,
    file: File,
}

impl Journal {
    /// Opens or creates `path` for appending and returns its current text.
    /// A torn final line left by a crash is terminated so later appends
    /// start on a fresh line.
    pub fn open(path: impl AsRef<Path>) -> Result<(Self, String), ServiceError> {
        let path = path.as_ref().to_path_buf();
        let mut file = OpenOptions::new()
            .create(true)
            .read(true)
            .append(true)
            .open(&path)
            .map_err(|e| ServiceError::io(&path, e))?;
        let mut text = String::new();
        file.read_to_string(&mut text).map_err(|e| ServiceError::io(&path, e))?;
        if !text.is_empty() && !text.ends_with('\n') {
            log::warn!("{}: terminating incomplete final line", path.display());
            file.write_all(b"\n").map_err(|e| ServiceError::io(&path, e))?;
            text.push('\n');
        }
        Ok((Self { path, file }, text))
    }

    /// Writes one record as a single `write` of the line plus newline.
    pub fn append<T: Serialize>(&mut self, record: &T) -> Result<(), ServiceError> {
        let mut line = serde_json::to_vec(record).expect("records serialise");
        line.push(b'\n');
        self.file.write_all(&line).map_err(|e| ServiceError::io(&self.path, e))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn appends_and_repairs_torn_tail() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("j.jsonl");
        {
            let (mut j, text) = Journal::open(&path).unwrap();
            assert!(text.is_empty());
            j.append(&serde_json::json!({"a": 1})).unwrap();
        }
        std::fs::OpenOptions::new().append(true).open(&path).unwrap().write_all(b"{\"a\":").unwrap();
        let (mut j, text) = Journal::open(&path).unwrap();
        assert_eq!(text, "{\"a\":1}\n{\"a\":\n");
        j.append(&serde_json::json!({"a": 2})).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "{\"a\":1}\n{\"a\":\n{\"a\":2}\n");
    }
}
