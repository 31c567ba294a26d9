use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::seed::DERIVATION;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub master: u64,
    pub derivation: String,
}

impl Seeds {
    pub fn new(master: u64) -> Self {
        Seeds { master, derivation: DERIVATION.to_string() }
    }
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), HarnessError> {
    fs::write(path, bytes).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })
}

/// Pretty-printed JSON followed by a newline.
pub fn write_report<T: Serialize>(report: &T, path: impl AsRef<Path>) -> Result<(), HarnessError> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    write_bytes(path.as_ref(), text.as_bytes())
}

pub fn read_report<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T, HarnessError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })?;
    Ok(serde_json::from_str(&text)?)
}

/// CSV with header `size,count` and one row per size, ascending.
pub fn write_histogram(histogram: &[(usize, usize)], path: impl AsRef<Path>) -> Result<(), HarnessError> {
    let mut rows: Vec<(usize, usize)> = histogram.to_vec();
    rows.sort_unstable();
    let mut text = String::from("size,count\n");
    for (size, count) in rows {
        text.push_str(&format!("{size},{count}\n"));
    }
    write_bytes(path.as_ref(), text.as_bytes())
}
