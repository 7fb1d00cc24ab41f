//! Shared file plumbing for the subcommands.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;

use biclust_core::csvio;
use biclust_core::jsonio;
use biclust_core::Matrix;

pub fn read_matrix_file(path: &Path, header: bool, row_labels: bool) -> Result<Matrix> {
    let file = fs::File::open(path)
        .with_context(|| format!("cannot open matrix file {}", path.display()))?;
    csvio::read_matrix(std::io::BufReader::new(file), header, row_labels)
        .with_context(|| format!("cannot parse matrix file {}", path.display()))
}

pub fn write_matrix_file(path: &Path, m: &Matrix) -> Result<()> {
    let file = fs::File::create(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    csvio::write_matrix(std::io::BufWriter::new(file), m)
        .with_context(|| format!("cannot write matrix to {}", path.display()))
}

pub fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let json = jsonio::to_json_string(value)
        .with_context(|| format!("cannot serialize {}", path.display()))?;
    fs::write(path, json).with_context(|| format!("cannot write {}", path.display()))
}

pub fn read_json_file<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    jsonio::from_json_str(&text).with_context(|| format!("cannot parse JSON in {}", path.display()))
}
