// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

//! JSON file formats.
//!
//! Matrices are nested arrays of rows. A state file is `{"n", "G"}`; a
//! channel file is `{"n_in", "n_out", "A", "B", "C", "D"}` where `C` is
//! `[re, im]` and defaults to `[1, 0]`, and `D` defaults to zero; a dilation
//! file is `{"n", "m", "R", "G_E"}`. Floats are written in shortest
//! round-trip form, so a write followed by a read is bit-exact.

use std::fs;
use std::path::{Path, PathBuf};

use fgauss_core::channel::GaussianChannelData;
use fgauss_core::models::Dilation;
use fgauss_core::{AntisymmetricMatrix, CovarianceMatrix, Mat};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },

    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },

    #[error("{}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
}

type Rows = Vec<Vec<f64>>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    n: usize,
    #[serde(rename = "G")]
    g: Rows,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelFile {
    n_in: usize,
    n_out: usize,
    #[serde(rename = "A")]
    a: Rows,
    #[serde(rename = "B")]
    b: Rows,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    c: Option<[f64; 2]>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    d: Option<Rows>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DilationFile {
    n: usize,
    m: usize,
    #[serde(rename = "R")]
    r: Rows,
    #[serde(rename = "G_E")]
    g_e: Rows,
}

/// Channel data as read, before any antisymmetry or CP check.
#[derive(Debug, Clone, PartialEq)]
pub struct RawChannel {
    pub n_in: usize,
    pub n_out: usize,
    pub a: Mat,
    pub b: Mat,
    pub c: Complex64,
    pub d: Mat,
}

impl RawChannel {
    pub fn to_data(&self) -> fgauss_core::Result<GaussianChannelData> {
        GaussianChannelData::new(
            AntisymmetricMatrix::new(self.a.clone())?,
            self.b.clone(),
            self.c,
            AntisymmetricMatrix::new(self.d.clone())?,
        )
    }
}

/// Dilation as read: `R` and the environment covariance, unchecked.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDilation {
    pub n: usize,
    pub m: usize,
    pub r: Mat,
    pub g_e: Mat,
}

impl RawDilation {
    pub fn to_dilation(&self) -> fgauss_core::Result<Dilation> {
        let g_e = CovarianceMatrix::from_matrix(self.g_e.clone())?;
        Dilation::new(self.r.clone(), g_e, self.n)
    }
}

/// Any of the three file kinds, told apart by their keys.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    /// Mode count and the raw `G`.
    State(usize, Mat),
    Channel(RawChannel),
    Dilation(RawDilation),
}

fn read_text(path: &Path) -> Result<String, FileError> {
    fs::read_to_string(path).map_err(|source| FileError::Read {
        path: path.to_owned(),
        source,
    })
}

fn parse_error(path: &Path, e: serde_json::Error) -> FileError {
    FileError::Parse {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn format_error(path: &Path, message: impl Into<String>) -> FileError {
    FileError::Format {
        path: path.to_owned(),
        message: message.into(),
    }
}

fn matrix(path: &Path, name: &str, rows: &Rows, nrows: usize, ncols: usize) -> Result<Mat, FileError> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        let found_cols = rows.first().map_or(0, Vec::len);
        return Err(format_error(
            path,
            format!("{name} must be {nrows}x{ncols}, found {}x{found_cols}", rows.len()),
        ));
    }
    Ok(Mat::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn rows(m: &Mat) -> Rows {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn state_from(path: &Path, f: StateFile) -> Result<(usize, Mat), FileError> {
    let g = matrix(path, "G", &f.g, 2 * f.n, 2 * f.n)?;
    Ok((f.n, g))
}

fn channel_from(path: &Path, f: ChannelFile) -> Result<RawChannel, FileError> {
    let (p, q) = (2 * f.n_out, 2 * f.n_in);
    let a = matrix(path, "A", &f.a, p, p)?;
    let b = matrix(path, "B", &f.b, p, q)?;
    let d = match &f.d {
        Some(d) => matrix(path, "D", d, q, q)?,
        None => Mat::zeros(q, q),
    };
    let [re, im] = f.c.unwrap_or([1.0, 0.0]);
    Ok(RawChannel {
        n_in: f.n_in,
        n_out: f.n_out,
        a,
        b,
        c: Complex64::new(re, im),
        d,
    })
}

fn dilation_from(path: &Path, f: DilationFile) -> Result<RawDilation, FileError> {
    let dim = 2 * (f.n + f.m);
    Ok(RawDilation {
        n: f.n,
        m: f.m,
        r: matrix(path, "R", &f.r, dim, dim)?,
        g_e: matrix(path, "G_E", &f.g_e, 2 * f.m, 2 * f.m)?,
    })
}

fn read_as<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, FileError> {
    serde_json::from_str(&read_text(path)?).map_err(|e| parse_error(path, e))
}

/// Reads a state file without checking the covariance bound.
pub fn read_raw_state(path: &Path) -> Result<(usize, Mat), FileError> {
    state_from(path, read_as(path)?)
}

pub fn read_raw_channel(path: &Path) -> Result<RawChannel, FileError> {
    channel_from(path, read_as(path)?)
}

/// Reads a file of any kind.
pub fn read_document(path: &Path) -> Result<Document, FileError> {
    let value: Value = serde_json::from_str(&read_text(path)?).map_err(|e| parse_error(path, e))?;
    let has = |key: &str| value.get(key).is_some();
    let shape = |e: serde_json::Error| format_error(path, e.to_string());
    if has("G") {
        let (n, g) = state_from(path, serde_json::from_value(value).map_err(shape)?)?;
        Ok(Document::State(n, g))
    } else if has("R") {
        Ok(Document::Dilation(dilation_from(path, serde_json::from_value(value).map_err(shape)?)?))
    } else if has("A") || has("B") {
        Ok(Document::Channel(channel_from(path, serde_json::from_value(value).map_err(shape)?)?))
    } else {
        Err(format_error(path, "expected a state (G), channel (A, B) or dilation (R, G_E) object"))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text
}

/// Writes `text` to `path`.
pub fn write_text(path: &Path, text: &str) -> Result<(), FileError> {
    fs::write(path, text).map_err(|source| FileError::Write {
        path: path.to_owned(),
        source,
    })
}

pub fn state_json(g: &CovarianceMatrix) -> String {
    to_json(&StateFile {
        n: g.modes(),
        g: rows(g.as_matrix()),
    })
}

pub fn channel_json(ch: &GaussianChannelData) -> String {
    to_json(&ChannelFile {
        n_in: ch.n_in(),
        n_out: ch.n_out(),
        a: rows(ch.a().as_matrix()),
        b: rows(ch.b()),
        c: Some([ch.c().re, ch.c().im]),
        d: Some(rows(ch.d().as_matrix())),
    })
}

pub fn dilation_json(d: &Dilation) -> String {
    to_json(&DilationFile {
        n: d.system_modes(),
        m: d.environment_modes(),
        r: rows(d.rotation()),
        g_e: rows(d.environment().as_matrix()),
    })
}

/// Canonical frame and mode split of a support-restricted recovery map.
pub fn frame_json(frame: &Mat, mixed_modes: &[usize], pure_modes: &[usize]) -> String {
    to_json(&serde_json::json!({
        "frame": rows(frame),
        "mixed_modes": mixed_modes,
        "pure_modes": pure_modes,
    }))
}

pub fn write_state(path: &Path, g: &CovarianceMatrix) -> Result<(), FileError> {
    write_text(path, &state_json(g))
}

pub fn write_channel(path: &Path, ch: &GaussianChannelData) -> Result<(), FileError> {
    write_text(path, &channel_json(ch))
}

/// Reads and validates a state.
pub fn read_state(path: &Path) -> Result<CovarianceMatrix, ReadError> {
    let (_, g) = read_raw_state(path)?;
    Ok(CovarianceMatrix::from_matrix(g)?)
}

/// Reads channel data from a channel or dilation file.
pub fn read_channel(path: &Path) -> Result<GaussianChannelData, ReadError> {
    match read_document(path)? {
        Document::Channel(raw) => Ok(raw.to_data()?),
        Document::Dilation(raw) => Ok(fgauss_core::models::dilation_channel(&raw.to_dilation()?).into_data()),
        Document::State(..) => Err(format_error(path, "expected a channel or dilation, found a state").into()),
    }
}

/// A file that failed to load, either structurally or because its content
/// violates a mathematical constraint.
#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error(transparent)]
    File(#[from] FileError),
    #[error(transparent)]
    Invalid(#[from] fgauss_core::Error),
}

#[cfg(test)]
mod tests {
    use super::*;
    use fgauss_core::models::random_channel;
    use fgauss_core::random::{random_mixed_covariance, rng};

    #[test]
    fn round_trips_are_exact() {
        let dir = tempfile::tempdir().unwrap();
        let g = random_mixed_covariance(&mut rng(1), 3);
        let path = dir.path().join("state.json");
        write_state(&path, &g).unwrap();
        assert_eq!(read_state(&path).unwrap().as_matrix(), g.as_matrix());

        let ch = random_channel(2, 2, 1).into_data();
        let path = dir.path().join("channel.json");
        write_channel(&path, &ch).unwrap();
        assert_eq!(read_channel(&path).unwrap(), ch);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        fs::write(&path, "{\n  \"n\": 1,\n  \"G\": [[0, 1],\n").unwrap();
        match read_document(&path) {
            Err(FileError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shapes_are_checked() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.json");
        fs::write(&path, r#"{"n": 2, "G": [[0, 1], [-1, 0]]}"#).unwrap();
        assert!(matches!(read_document(&path), Err(FileError::Format { .. })));
    }

    #[test]
    fn optional_channel_fields_default() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("id.json");
        fs::write(&path, r#"{"n_in": 1, "n_out": 1, "A": [[0, 0], [0, 0]], "B": [[1, 0], [0, 1]]}"#).unwrap();
        assert_eq!(read_channel(&path).unwrap(), GaussianChannelData::identity(1));
    }
}
