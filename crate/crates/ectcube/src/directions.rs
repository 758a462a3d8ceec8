//! Direction sets: CSV files or seeded uniform samples in `[0, 1)^n`.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ectcube_core::Direction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum DirectionSource {
    File(PathBuf),
    Random { count: usize, seed: u64 },
}

impl FromStr for DirectionSource {
    type Err = Error;

    /// `random:COUNT:SEED`, or a path to a CSV file.
    fn from_str(s: &str) -> Result<Self> {
        match s.strip_prefix("random:") {
            Some(rest) => {
                let (count, seed) = rest
                    .split_once(':')
                    .and_then(|(c, s)| Some((c.parse().ok()?, s.parse().ok()?)))
                    .ok_or_else(|| {
                        Error::format(format!("expected random:COUNT:SEED, got {s:?}"))
                    })?;
                Ok(Self::Random { count, seed })
            }
            None => Ok(Self::File(PathBuf::from(s))),
        }
    }
}

impl DirectionSource {
    /// Raw coordinates, checked for dimension but not for genericity.
    pub fn load(&self, ndim: usize) -> Result<Vec<Vec<f64>>> {
        match self {
            Self::File(path) => {
                let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
                parse_directions(&bytes, ndim).map_err(|e| match e {
                    Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
                    other => other,
                })
            }
            Self::Random { count, seed } => Ok(random_directions(ndim, *count, *seed)),
        }
    }
}

pub fn parse_directions(bytes: &[u8], ndim: usize) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(bytes);
    let mut out = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::format(format!("CSV: {e}")))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != ndim {
            return Err(Error::format(format!(
                "direction row {row} has {} coordinates, the image has {ndim} axes",
                record.len()
            )));
        }
        let coords = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::format(format!("invalid coordinate {f:?} in row {row}")))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(coords);
    }
    Ok(out)
}

pub fn read_directions(path: &Path, ndim: usize) -> Result<Vec<Vec<f64>>> {
    DirectionSource::File(path.to_path_buf()).load(ndim)
}

/// Uniform in `[0, 1)^n`; exact zeros are redrawn so every direction is
/// generic.
pub fn random_directions(ndim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..ndim)
                .map(|_| loop {
                    let c: f64 = rng.random();
                    if c != 0.0 {
                        break c;
                    }
                })
                .collect()
        })
        .collect()
}

/// Validates every direction, reporting the first non-generic one by index.
pub fn validate(raw: &[Vec<f64>]) -> Result<Vec<Direction>> {
    raw.iter()
        .enumerate()
        .map(|(index, c)| {
            Direction::new(c.clone()).map_err(|source| Error::Direction { index, source })
        })
        .collect()
}
