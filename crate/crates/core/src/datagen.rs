//! Synthetic 2D test images.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::ImageTensor;
use crate::{Error, Result};

/// `k × k` isolated square blocks of side `s` on an `m × m` background.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternSpec {
    pub image_size: usize,
    pub square_count: usize,
    pub square_side: usize,
}

impl PatternSpec {
    /// Blocks need a side of at least 2 and `k (s + 1) ≤ m`, which keeps them
    /// one background pixel apart.
    pub fn new(image_size: usize, square_count: usize, square_side: usize) -> Result<Self> {
        if image_size == 0 {
            return Err(Error::InvalidParameter(
                "image size must be positive".into(),
            ));
        }
        if square_side < 2 {
            return Err(Error::InvalidParameter(format!(
                "square side {square_side} is below 2"
            )));
        }
        if square_count * (square_side + 1) > image_size {
            return Err(Error::InvalidParameter(format!(
                "{square_count} squares of side {square_side} do not fit in {image_size} pixels"
            )));
        }
        Ok(Self {
            image_size,
            square_count,
            square_side,
        })
    }

    /// Side `max(2, ⌊m / 2k⌋)`.
    pub fn with_default_side(image_size: usize, square_count: usize) -> Result<Self> {
        let side = match square_count {
            0 => 2,
            k => (image_size / (2 * k)).max(2),
        };
        Self::new(image_size, square_count, side)
    }
}

/// Block `(i, j)` has its top-left pixel at `(⌊i m / k⌋, ⌊j m / k⌋)`; blocks
/// are 1, background 0. Under the vertex construction every block has one
/// classical and two ordinary critical points per sign vector.
pub fn gen_squares(spec: PatternSpec) -> ImageTensor {
    let PatternSpec {
        image_size: m,
        square_count: k,
        square_side: s,
    } = spec;
    let mut values = vec![0; m * m];
    for i in 0..k {
        for j in 0..k {
            let (r0, c0) = (i * m / k, j * m / k);
            for r in r0..r0 + s {
                values[r * m + c0..r * m + c0 + s].fill(1);
            }
        }
    }
    ImageTensor::new(vec![m, m], values).expect("shape matches")
}

/// I.i.d. uniform values in `0..levels` on an `m × m` grid.
pub fn gen_uniform(m: usize, levels: u32, seed: u64) -> Result<ImageTensor> {
    check_levels(m, levels)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..m * m)
        .map(|_| rng.random_range(0..levels) as i32)
        .collect();
    ImageTensor::new(vec![m, m], values)
}

/// Uniform noise in `[-1, 1)`, row-major `m × m`.
pub fn white_noise(m: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m * m).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Equal-width binning of `field` over its own range into `0..levels`. A
/// constant field maps to 0.
pub fn quantize(field: &[f64], levels: u32) -> Vec<i32> {
    let lo = field.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = field.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return vec![0; field.len()];
    }
    let top = (levels - 1) as i32;
    field
        .iter()
        .map(|&v| ((((v - lo) / (hi - lo)) * f64::from(levels)) as i32).min(top))
        .collect()
}

/// Separable Gaussian blur with radius `⌈3σ⌉` and replicated borders.
pub fn gaussian_blur(field: &[f64], m: usize, sigma: f64) -> Vec<f64> {
    let radius = libm::ceil(3.0 * sigma) as isize;
    let weights: Vec<f64> = (-radius..=radius)
        .map(|j| libm::exp(-((j * j) as f64) / (2.0 * sigma * sigma)))
        .collect();
    let norm: f64 = weights.iter().sum();
    let last = m as isize - 1;
    let pass = |src: &[f64], along_rows: bool| -> Vec<f64> {
        let mut out = vec![0.0; src.len()];
        for r in 0..m {
            for c in 0..m {
                let mut acc = 0.0;
                for (w, j) in weights.iter().zip(-radius..=radius) {
                    let (rr, cc) = if along_rows {
                        (r as isize, (c as isize + j).clamp(0, last))
                    } else {
                        ((r as isize + j).clamp(0, last), c as isize)
                    };
                    acc += w * src[rr as usize * m + cc as usize];
                }
                out[r * m + c] = acc / norm;
            }
        }
        out
    };
    pass(&pass(field, true), false)
}

/// Blurred white noise quantized to `levels` values.
pub fn gen_smooth_field(m: usize, levels: u32, sigma: f64, seed: u64) -> Result<ImageTensor> {
    check_levels(m, levels)?;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "sigma {sigma} must be positive"
        )));
    }
    let field = gaussian_blur(&white_noise(m, seed), m, sigma);
    ImageTensor::new(vec![m, m], quantize(&field, levels))
}

fn check_levels(m: usize, levels: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "image size must be positive".into(),
        ));
    }
    if levels < 2 || levels > i32::MAX as u32 {
        return Err(Error::InvalidParameter(format!(
            "{levels} levels; need at least 2"
        )));
    }
    Ok(())
}
