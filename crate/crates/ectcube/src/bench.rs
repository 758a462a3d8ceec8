//! Wall-clock timings of the three phases: building the grid, preprocessing
//! critical points, and computing transforms for a batch of directions.

use std::time::Instant;

use ectcube_core::critical::critical_stats;
use ectcube_core::datagen::{gen_smooth_field, gen_squares, gen_uniform, PatternSpec};
use ectcube_core::transforms::{ect_curve, ht, radon_rep};
use ectcube_core::{Direction, ImageTensor, Kernel};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::parallel::{map_ordered, preprocess_parallel};
use crate::pipeline::{build_grid, Construction, Transform};

#[derive(Debug, Clone, PartialEq)]
pub enum Pattern {
    /// `k × k` blocks; `side` defaults to `max(2, m / 2k)`.
    Squares {
        count: usize,
        side: Option<usize>,
    },
    Uniform {
        levels: u32,
        seed: u64,
    },
    Smooth {
        levels: u32,
        sigma: f64,
        seed: u64,
    },
}

impl Pattern {
    pub fn generate(&self, size: usize) -> Result<ImageTensor> {
        Ok(match *self {
            Pattern::Squares { count, side: None } => {
                gen_squares(PatternSpec::with_default_side(size, count)?)
            }
            Pattern::Squares {
                count,
                side: Some(s),
            } => gen_squares(PatternSpec::new(size, count, s)?),
            Pattern::Uniform { levels, seed } => gen_uniform(size, levels, seed)?,
            Pattern::Smooth {
                levels,
                sigma,
                seed,
            } => gen_smooth_field(size, levels, sigma, seed)?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub pattern: Pattern,
    pub sizes: Vec<usize>,
    pub construction: Construction,
    pub transform: Transform,
    pub kernel: Kernel,
    pub directions: Vec<Vec<f64>>,
    pub threads: usize,
    /// The computation phase is repeated and the fastest run is kept.
    pub repeats: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub phase: &'static str,
    pub size: usize,
    /// Mean over sign vectors of the critical points the transform uses.
    pub crit_count: f64,
    pub threads: usize,
    pub seconds: f64,
}

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let dirs = crate::directions::validate(&cfg.directions)?;
    let mut rows = Vec::new();
    for &size in &cfg.sizes {
        let img = cfg.pattern.generate(size)?;
        if dirs.iter().any(|d| d.ndim() != img.ndim()) {
            return Err(Error::format(
                "direction dimension differs from the image dimension",
            ));
        }

        let start = Instant::now();
        let grid = build_grid(&img, cfg.construction, Default::default());
        let init = start.elapsed().as_secs_f64();

        let start = Instant::now();
        let table = preprocess_parallel(&grid, cfg.threads);
        let preprocessing = start.elapsed().as_secs_f64();

        let stats = critical_stats(&table);
        let crit_count = match cfg.transform {
            Transform::Ect => stats.classical_mean,
            Transform::Radon => stats.classical_mean + stats.ordinary_mean,
            Transform::Ht => stats.ordinary_mean,
        };

        let mut computation = f64::INFINITY;
        for _ in 0..cfg.repeats.max(1) {
            let start = Instant::now();
            let done = map_ordered(&dirs, cfg.threads, |xi: &Direction| -> Result<()> {
                match cfg.transform {
                    Transform::Ect => {
                        std::hint::black_box(ect_curve(&grid, &table, xi)?);
                    }
                    Transform::Radon => {
                        std::hint::black_box(radon_rep(&grid, &table, xi)?);
                    }
                    Transform::Ht => {
                        std::hint::black_box(ht(&grid, &table, xi, &cfg.kernel)?);
                    }
                }
                Ok(())
            });
            computation = computation.min(start.elapsed().as_secs_f64());
            done.into_iter().collect::<Result<Vec<()>>>()?;
        }
        let per_direction = if dirs.is_empty() {
            0.0
        } else {
            computation / dirs.len() as f64
        };

        let row = |phase, seconds| BenchRow {
            phase,
            size,
            crit_count,
            threads: cfg.threads,
            seconds,
        };
        rows.push(row("init", init));
        rows.push(row("preprocessing", preprocessing));
        rows.push(row("computation", computation));
        rows.push(row("computation_per_direction", per_direction));
    }
    Ok(rows)
}

pub fn encode_rows(rows: &[BenchRow]) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::format(e.to_string()))?;
    }
    writer
        .into_inner()
        .map_err(|e| Error::format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_direction_list_still_reports() {
        let cfg = BenchConfig {
            pattern: Pattern::Squares {
                count: 2,
                side: None,
            },
            sizes: vec![20],
            construction: Construction::Vertex,
            transform: Transform::Ect,
            kernel: Kernel::Sin,
            directions: vec![],
            threads: 1,
            repeats: 1,
        };
        let rows = run_bench(&cfg).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].crit_count, 4.0);
        assert_eq!(rows[3].seconds, 0.0);
        let csv = String::from_utf8(encode_rows(&rows).unwrap()).unwrap();
        assert!(csv.starts_with("phase,size,crit_count,threads,seconds\ninit,20,4.0,1,"));
    }
}
