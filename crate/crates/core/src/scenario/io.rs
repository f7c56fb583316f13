//! Trace, report and manifest files.
//!
//! Traces are JSON lines, one step per line. Floats are written with 17
//! significant digits so every value parses back to the same bits.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::simulator::{ScenarioConfig, StepTrace};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}:{line}: {source}", path.display())]
    Json {
        path: PathBuf,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

/// Compact JSON with floats in `{:.16e}` form.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactFloatFormatter;

impl serde_json::ser::Formatter for ExactFloatFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_exact_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, ExactFloatFormatter);
    value
        .serialize(&mut ser)
        .expect("serializing plain data to memory cannot fail");
    out
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes one JSON document per item, newline-terminated.
pub fn write_json_lines<T: Serialize>(items: &[T], path: &Path) -> Result<(), IoError> {
    let mut w = BufWriter::new(File::create(path).map_err(io_err(path))?);
    for item in items {
        w.write_all(&to_exact_json(item)).map_err(io_err(path))?;
        w.write_all(b"\n").map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn read_json_lines<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, IoError> {
    let r = BufReader::new(File::open(path).map_err(io_err(path))?);
    let mut out = Vec::new();
    for (k, line) in r.lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|source| IoError::Json {
            path: path.to_path_buf(),
            line: k + 1,
            source,
        })?);
    }
    Ok(out)
}

/// Writes a single JSON document followed by a newline.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), IoError> {
    let mut bytes = to_exact_json(value);
    bytes.push(b'\n');
    std::fs::write(path, bytes).map_err(io_err(path))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: path.to_path_buf(),
        line: source.line(),
        source,
    })
}

pub fn emit_trace(trace: &[StepTrace], path: &Path) -> Result<(), IoError> {
    write_json_lines(trace, path)
}

pub fn parse_trace(path: &Path) -> Result<Vec<StepTrace>, IoError> {
    read_json_lines(path)
}

/// SHA-256 of the resolved configuration's canonical JSON.
pub fn config_hash(cfg: &ScenarioConfig) -> String {
    hash_of(cfg)
}

pub fn hash_of<T: Serialize>(value: &T) -> String {
    hex::encode(Sha256::digest(to_exact_json(value)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub config_sha256: String,
    pub rng_seed: u64,
    pub duration_seconds: f64,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(
        command: &str,
        config_sha256: String,
        rng_seed: u64,
        duration: std::time::Duration,
        outputs: Vec<PathBuf>,
    ) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config_sha256,
            rng_seed,
            duration_seconds: duration.as_secs_f64(),
            outputs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_bit_exact() {
        let xs = [
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            6.02214076e23,
            0.0,
            -0.0,
            f64::MIN_POSITIVE,
            5e-324,
        ];
        let bytes = to_exact_json(&xs.to_vec());
        let back: Vec<f64> = serde_json::from_slice(&bytes).unwrap();
        for (a, b) in xs.iter().zip(&back) {
            assert_eq!(a.to_bits(), b.to_bits(), "{a} vs {b}");
        }
    }

    #[test]
    fn seventeen_significant_digits() {
        let s = String::from_utf8(to_exact_json(&0.1f64)).unwrap();
        assert_eq!(s, "1.0000000000000001e-1");
    }

    #[test]
    fn integers_stay_integers() {
        let s = String::from_utf8(to_exact_json(&(3usize, 2.0f64))).unwrap();
        assert_eq!(s, "[3,2.0000000000000000e0]");
    }
}
