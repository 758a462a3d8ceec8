//! Command line definitions and dispatch.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ectcube_core::datagen::{gen_smooth_field, gen_squares, gen_uniform, PatternSpec};
use ectcube_core::Kernel;

use crate::bench::{encode_rows, run_bench, BenchConfig, Pattern};
use crate::directions::DirectionSource;
use crate::error::{Error, Result};
use crate::formats::{write_image, ImageFormat};
use crate::pipeline::{compute, stats, Construction, Embedding, RunConfig, Sampling, Transform};

#[derive(Debug, Parser)]
#[command(
    name = "ectcube",
    version,
    about = "Exact Euler characteristic, Radon and hybrid transforms of images"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute transforms of an image for a set of directions.
    Compute(ComputeArgs),
    /// Count critical points per sign vector.
    Stats(StatsArgs),
    /// Generate a synthetic image.
    Gen(GenArgs),
    /// Time initialization, preprocessing and computation.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Defaults to the file extension (.pgm/.pnm, .csv, .etf).
    #[arg(long, value_enum)]
    pub format: Option<ImageFormat>,
    #[arg(long, value_enum, default_value = "vertex")]
    pub construction: Construction,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub transform: Transform,
    /// CSV file with one direction per row, or random:COUNT:SEED.
    #[arg(long)]
    pub directions: String,
    /// exp, sin, cos or monomial:K; names refer to the kernel, not its primitive.
    #[arg(long)]
    pub kernel: Option<String>,
    /// Sample at A,B,N evenly spaced points and write CSV.
    #[arg(long, allow_hyphen_values = true)]
    pub vectorize: Option<String>,
    #[arg(long, value_enum, default_value = "normalized")]
    pub embedding: Embedding,
    /// Check every emitted value against the full-scan oracle.
    #[arg(long)]
    pub oracle: bool,
    /// Defaults to standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub pattern: GenPattern,
    /// Output image; the format follows the extension.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GenPattern {
    /// k × k isolated squares of value 1 on a 0 background.
    Squares {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        count: usize,
        /// Defaults to max(2, size / (2 count)).
        #[arg(long)]
        side: Option<usize>,
    },
    /// I.i.d. uniform values in 0..levels.
    Uniform {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 2)]
        levels: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Gaussian-blurred white noise quantized to `levels` values.
    Smooth {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 16)]
        levels: u32,
        #[arg(long, default_value_t = 2.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BenchPattern {
    Squares,
    Uniform,
    Smooth,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "squares")]
    pub pattern: BenchPattern,
    /// Comma-separated image sizes.
    #[arg(long, value_delimiter = ',', default_value = "100,200,400")]
    pub sizes: Vec<usize>,
    /// Squares per side for the squares pattern.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Square side for the squares pattern.
    #[arg(long)]
    pub side: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub levels: u32,
    #[arg(long, default_value_t = 2.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "vertex")]
    pub construction: Construction,
    #[arg(long, value_enum, default_value = "ect")]
    pub transform: Transform,
    #[arg(long, default_value = "sin")]
    pub kernel: String,
    #[arg(long, default_value = "random:100:0")]
    pub directions: String,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match output {
        Some(path) => fs::write(path, bytes).map_err(|e| Error::io(path, e)),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn parse_kernel(name: &str) -> Result<Kernel> {
    Ok(name.parse::<Kernel>()?)
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compute(args) => {
            let cfg = RunConfig {
                input: args.input.input,
                format: args.input.format,
                construction: args.input.construction,
                embedding: args.embedding,
                transform: args.transform,
                directions: args.directions.parse()?,
                kernel: args.kernel.as_deref().map(parse_kernel).transpose()?,
                vectorize: args
                    .vectorize
                    .as_deref()
                    .map(str::parse::<Sampling>)
                    .transpose()?,
                threads: args.input.threads,
                oracle: args.oracle,
            };
            emit(args.output.as_deref(), &compute(&cfg)?)
        }
        Command::Stats(args) => {
            let report = stats(
                &args.input.input,
                args.input.format,
                args.input.construction,
                args.input.threads,
            )?;
            let mut bytes = serde_json::to_vec_pretty(&report).expect("stats serialize");
            bytes.push(b'\n');
            emit(args.output.as_deref(), &bytes)
        }
        Command::Gen(args) => {
            let img = match args.pattern {
                GenPattern::Squares { size, count, side } => {
                    let spec = match side {
                        Some(s) => PatternSpec::new(size, count, s)?,
                        None => PatternSpec::with_default_side(size, count)?,
                    };
                    gen_squares(spec)
                }
                GenPattern::Uniform { size, levels, seed } => gen_uniform(size, levels, seed)?,
                GenPattern::Smooth {
                    size,
                    levels,
                    sigma,
                    seed,
                } => gen_smooth_field(size, levels, sigma, seed)?,
            };
            match args.output {
                Some(path) => write_image(&path, None, &img),
                None => emit(None, crate::formats::encode_etf(&img).as_bytes()),
            }
        }
        Command::Bench(args) => {
            let pattern = match args.pattern {
                BenchPattern::Squares => Pattern::Squares {
                    count: args.count,
                    side: args.side,
                },
                BenchPattern::Uniform => Pattern::Uniform {
                    levels: args.levels,
                    seed: args.seed,
                },
                BenchPattern::Smooth => Pattern::Smooth {
                    levels: args.levels,
                    sigma: args.sigma,
                    seed: args.seed,
                },
            };
            let directions = args.directions.parse::<DirectionSource>()?.load(2)?;
            let cfg = BenchConfig {
                pattern,
                sizes: args.sizes,
                construction: args.construction,
                transform: args.transform,
                kernel: parse_kernel(&args.kernel)?,
                directions,
                threads: args.threads.max(1),
                repeats: args.repeats,
            };
            emit(args.output.as_deref(), &encode_rows(&run_bench(&cfg)?)?)
        }
    }
}
