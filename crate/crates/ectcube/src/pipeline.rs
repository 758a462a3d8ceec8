//! The `compute` and `stats` pipelines, independent of argument parsing.

use std::path::PathBuf;

use ectcube_core::critical::{critical_stats, CriticalStats};
use ectcube_core::transforms::{ect_curve, radon_rep, sample_points};
use ectcube_core::{CubicalGrid, EmbeddingMode, ImageTensor, Kernel, SignVector};
use serde::Serialize;

use crate::directions::{validate, DirectionSource};
use crate::error::{Error, Result};
use crate::formats::{read_image, ImageFormat};
use crate::parallel::{ht_batch, map_ordered, preprocess_parallel};
use crate::report::{encode_records, encode_vectors, Record};
use crate::verify;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Construction {
    /// Pixels are vertices; higher cells take the minimum of their vertices.
    #[default]
    Vertex,
    /// Pixels are top cells; lower cells take the minimum of their cofaces.
    Topcell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Transform {
    Ect,
    Radon,
    Ht,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Embedding {
    #[default]
    Normalized,
    Lattice,
}

impl From<Embedding> for EmbeddingMode {
    fn from(e: Embedding) -> Self {
        match e {
            Embedding::Normalized => EmbeddingMode::Normalized,
            Embedding::Lattice => EmbeddingMode::Lattice,
        }
    }
}

pub fn build_grid(
    img: &ImageTensor,
    construction: Construction,
    embedding: Embedding,
) -> CubicalGrid {
    let grid = match construction {
        Construction::Vertex => CubicalGrid::from_vertex_values(img),
        Construction::Topcell => CubicalGrid::from_top_values(img),
    };
    grid.with_embedding(embedding.into())
}

/// Sampling range `(a, b, count)` of a vectorization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    pub a: f64,
    pub b: f64,
    pub count: usize,
}

impl std::str::FromStr for Sampling {
    type Err = Error;

    /// `A,B,N`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::format(format!("expected A,B,N, got {s:?}"));
        let [a, b, n] = parts.as_slice() else {
            return Err(bad());
        };
        Ok(Self {
            a: a.parse().map_err(|_| bad())?,
            b: b.parse().map_err(|_| bad())?,
            count: n.parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub format: Option<ImageFormat>,
    pub construction: Construction,
    pub embedding: Embedding,
    pub transform: Transform,
    pub directions: DirectionSource,
    pub kernel: Option<Kernel>,
    pub vectorize: Option<Sampling>,
    pub threads: usize,
    pub oracle: bool,
}

/// Runs a `compute` request and returns the bytes to emit: a JSON array of
/// records, or CSV rows when vectorizing.
pub fn compute(cfg: &RunConfig) -> Result<Vec<u8>> {
    let img = read_image(&cfg.input, cfg.format)?;
    let grid = build_grid(&img, cfg.construction, cfg.embedding);
    let raw = cfg.directions.load(grid.ndim())?;
    let dirs = validate(&raw)?;
    if cfg.transform == Transform::Ht && cfg.vectorize.is_some() {
        return Err(Error::format(
            "the hybrid transform is a scalar and cannot be vectorized",
        ));
    }
    let kernel = match (cfg.transform, cfg.kernel) {
        (Transform::Ht, None) => return Err(Error::format("--transform ht needs --kernel")),
        (_, k) => k,
    };
    let threads = cfg.threads.max(1);
    let table = preprocess_parallel(&grid, threads);
    let with_index =
        |r: ectcube_core::Result<_>, index| r.map_err(|source| Error::Direction { index, source });

    match cfg.transform {
        Transform::Ect | Transform::Radon => {
            let radon = cfg.transform == Transform::Radon;
            let reps = map_ordered(&dirs, threads, |xi| {
                if radon {
                    radon_rep(&grid, &table, xi).map(Rep::Radon)
                } else {
                    ect_curve(&grid, &table, xi).map(Rep::Ect)
                }
            });
            let reps = reps
                .into_iter()
                .enumerate()
                .map(|(i, r)| with_index(r, i))
                .collect::<Result<Vec<_>>>()?;
            if let Some(Sampling { a, b, count }) = cfg.vectorize {
                let ts = sample_points(a, b, count)?;
                let mut rows = Vec::with_capacity(reps.len());
                for (xi, rep) in dirs.iter().zip(&reps) {
                    let row = match rep {
                        Rep::Ect(c) => c.vectorize(a, b, count)?,
                        Rep::Radon(r) => r.vectorize(a, b, count)?,
                    };
                    if cfg.oracle {
                        verify::check_samples(&grid, xi, radon, &ts, &row)?;
                    }
                    rows.push(row);
                }
                return encode_vectors(&rows);
            }
            let mut records = Vec::with_capacity(reps.len());
            for (xi, rep) in dirs.iter().zip(&reps) {
                match rep {
                    Rep::Ect(c) => {
                        if cfg.oracle {
                            verify::check_ect(&grid, xi, c)?;
                        }
                        records.push(Record::ect(xi.coords(), c));
                    }
                    Rep::Radon(r) => {
                        if cfg.oracle {
                            verify::check_radon(&grid, xi, r)?;
                        }
                        records.push(Record::radon(xi.coords(), r));
                    }
                }
            }
            Ok(encode_records(&records))
        }
        Transform::Ht => {
            let kernel = kernel.expect("checked above");
            let values = ht_batch(&grid, &table, &raw, &kernel, threads)?;
            let name = kernel.to_string();
            let mut records = Vec::with_capacity(values.len());
            for (xi, &v) in dirs.iter().zip(&values) {
                if cfg.oracle {
                    verify::check_ht(&grid, xi, &kernel, v)?;
                }
                records.push(Record::ht(&name, xi.coords(), v));
            }
            Ok(encode_records(&records))
        }
    }
}

enum Rep {
    Ect(ectcube_core::EctCurve),
    Radon(ectcube_core::RadonRep),
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsReport {
    pub shape: Vec<usize>,
    pub vertices: usize,
    /// In canonical index order: bit `i` of the index is set iff `ε_i = +1`.
    pub sign_vectors: Vec<Vec<i8>>,
    pub classical_counts: Vec<usize>,
    pub ordinary_counts: Vec<usize>,
    pub classical_mean: f64,
    pub classical_std: f64,
    pub ordinary_mean: f64,
    pub ordinary_std: f64,
}

impl StatsReport {
    pub fn new(grid: &CubicalGrid, stats: CriticalStats) -> Self {
        Self {
            shape: grid.vertex_extents(),
            vertices: grid.vertex_count(),
            sign_vectors: SignVector::all(grid.ndim())
                .map(SignVector::components)
                .collect(),
            classical_counts: stats.classical_counts,
            ordinary_counts: stats.ordinary_counts,
            classical_mean: stats.classical_mean,
            classical_std: stats.classical_std,
            ordinary_mean: stats.ordinary_mean,
            ordinary_std: stats.ordinary_std,
        }
    }
}

pub fn stats(
    input: &std::path::Path,
    format: Option<ImageFormat>,
    construction: Construction,
    threads: usize,
) -> Result<StatsReport> {
    let img = read_image(input, format)?;
    let grid = build_grid(&img, construction, Embedding::Normalized);
    let table = preprocess_parallel(&grid, threads.max(1));
    Ok(StatsReport::new(&grid, critical_stats(&table)))
}
