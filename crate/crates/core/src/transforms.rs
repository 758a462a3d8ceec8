//! Exact Euler characteristic and Radon curves, and hybrid transforms, from a
//! preprocessed [`CriticalTable`].
//!
//! For a generic direction `ξ` with sign vector `ε`:
//!
//! ```text
//! ECT(ξ, t)   = Σ_{x classical, ⟨ξ,x⟩ ≤ t} Δ⁻(ε, x)
//! Radon(ξ, t) = Σ_{x ordinary,  ⟨ξ,x⟩ < t} J(ε, x) + Σ_{x classical, ⟨ξ,x⟩ = t} Δ⁻(ε, x)
//! HT(ξ)       = -Σ_{x ordinary} J(ε, x) κ̄(⟨ξ,x⟩)
//! ```

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::critical::{CriticalTable, SignVector};
use crate::grid::CubicalGrid;
use crate::kernel::KernelPrimitive;
use crate::{Error, Result};

/// A direction with no zero coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    coords: Vec<f64>,
}

impl Direction {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                actual: 0,
            });
        }
        if let Some(axis) = coords.iter().position(|&c| c == 0.0 || !c.is_finite()) {
            return Err(Error::GenericityViolation {
                axis,
                value: coords[axis],
            });
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn ndim(&self) -> usize {
        self.coords.len()
    }

    pub fn sign_vector(&self) -> SignVector {
        let index = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0.0)
            .fold(0, |acc, (axis, _)| acc | 1 << axis);
        SignVector::from_index(index, self.ndim())
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.coords.iter().map(|c| c * factor).collect())
    }
}

pub fn sign_vector_of(xi: &[f64]) -> Result<SignVector> {
    Ok(Direction::new(xi.to_vec())?.sign_vector())
}

/// Right-continuous step function: `values[i]` holds on
/// `[breakpoints[i-1], breakpoints[i])`, with `values[0]` on
/// `(-∞, breakpoints[0])`.
#[derive(Debug, Clone, PartialEq)]
pub struct EctCurve {
    breakpoints: Vec<f64>,
    values: Vec<i64>,
}

impl EctCurve {
    /// Checks the representation invariants: breakpoints finite and strictly
    /// ascending, one more value than breakpoints, leading value zero.
    pub fn from_parts(breakpoints: Vec<f64>, values: Vec<i64>) -> Result<Self> {
        check_breakpoints(&breakpoints)?;
        check_cumulative(&breakpoints, &values)?;
        Ok(Self {
            breakpoints,
            values,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn evaluate(&self, t: f64) -> i64 {
        self.values[self.breakpoints.partition_point(|&b| b <= t)]
    }

    pub fn vectorize(&self, a: f64, b: f64, count: usize) -> Result<Vec<i64>> {
        let ts = sample_points(a, b, count)?;
        let mut j = 0;
        Ok(ts
            .into_iter()
            .map(|t| {
                while j < self.breakpoints.len() && self.breakpoints[j] <= t {
                    j += 1;
                }
                self.values[j]
            })
            .collect())
    }
}

/// Radon curve as ordinary breakpoints with cumulative jumps, plus the exact
/// values at the classical dots.
#[derive(Debug, Clone, PartialEq)]
pub struct RadonRep {
    ordinary_breakpoints: Vec<f64>,
    cumulative: Vec<i64>,
    classical_dots: Vec<f64>,
    values_at_dots: Vec<i64>,
}

impl RadonRep {
    pub fn from_parts(
        ordinary_breakpoints: Vec<f64>,
        cumulative: Vec<i64>,
        classical_dots: Vec<f64>,
        values_at_dots: Vec<i64>,
    ) -> Result<Self> {
        check_breakpoints(&ordinary_breakpoints)?;
        check_cumulative(&ordinary_breakpoints, &cumulative)?;
        check_breakpoints(&classical_dots)?;
        if classical_dots.len() != values_at_dots.len() {
            return Err(Error::InvalidParameter(alloc::format!(
                "{} classical dots but {} values",
                classical_dots.len(),
                values_at_dots.len()
            )));
        }
        Ok(Self {
            ordinary_breakpoints,
            cumulative,
            classical_dots,
            values_at_dots,
        })
    }

    pub fn ordinary_breakpoints(&self) -> &[f64] {
        &self.ordinary_breakpoints
    }

    pub fn cumulative(&self) -> &[i64] {
        &self.cumulative
    }

    pub fn classical_dots(&self) -> &[f64] {
        &self.classical_dots
    }

    pub fn values_at_dots(&self) -> &[i64] {
        &self.values_at_dots
    }

    pub fn evaluate(&self, t: f64) -> i64 {
        let c = self.classical_dots.partition_point(|&d| d < t);
        if c < self.classical_dots.len() && self.classical_dots[c] == t {
            return self.values_at_dots[c];
        }
        self.cumulative[self.ordinary_breakpoints.partition_point(|&b| b < t)]
    }

    pub fn vectorize(&self, a: f64, b: f64, count: usize) -> Result<Vec<i64>> {
        let ts = sample_points(a, b, count)?;
        let (mut j, mut c) = (0, 0);
        Ok(ts
            .into_iter()
            .map(|t| {
                while j < self.ordinary_breakpoints.len() && self.ordinary_breakpoints[j] < t {
                    j += 1;
                }
                while c < self.classical_dots.len() && self.classical_dots[c] < t {
                    c += 1;
                }
                if c < self.classical_dots.len() && self.classical_dots[c] == t {
                    self.values_at_dots[c]
                } else {
                    self.cumulative[j]
                }
            })
            .collect())
    }
}

/// `count` evenly spaced points `a + i (b - a) / (count - 1)`; just `a` when
/// `count` is 1.
pub fn sample_points(a: f64, b: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 || !a.is_finite() || !b.is_finite() || a > b {
        return Err(Error::InvalidRange { a, b, count });
    }
    if count == 1 {
        return Ok(alloc::vec![a]);
    }
    let span = b - a;
    let last = (count - 1) as f64;
    Ok((0..count).map(|i| a + span * i as f64 / last).collect())
}

fn check_breakpoints(breakpoints: &[f64]) -> Result<()> {
    if breakpoints.iter().any(|b| !b.is_finite()) || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "breakpoints must be finite and strictly ascending".into(),
        ));
    }
    Ok(())
}

fn check_cumulative(breakpoints: &[f64], values: &[i64]) -> Result<()> {
    if values.len() != breakpoints.len() + 1 || values[0] != 0 {
        return Err(Error::InvalidParameter(
            "expected one more value than breakpoints, starting at 0".into(),
        ));
    }
    Ok(())
}

fn check_inputs(grid: &CubicalGrid, table: &CriticalTable, xi: &Direction) -> Result<()> {
    grid.check_direction(xi.coords())?;
    if table.ndim() != grid.ndim() {
        return Err(Error::DimensionMismatch {
            expected: grid.ndim(),
            actual: table.ndim(),
        });
    }
    Ok(())
}

/// Distinct dots of `points`, ascending, each with the summed values of the
/// points landing on it. Dots whose sum vanishes are dropped.
fn merge_by_dot(
    grid: &CubicalGrid,
    xi: &[f64],
    points: &[usize],
    values: &[i64],
) -> (Vec<f64>, Vec<i64>) {
    let mut dotted: Vec<(f64, i64)> = points
        .iter()
        .zip(values)
        .map(|(&key, &v)| (grid.dot_unchecked(key, xi), v))
        .collect();
    // Points come in ascending key order and the sort is stable, so ties keep
    // key order.
    dotted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut dots = Vec::with_capacity(dotted.len());
    let mut sums: Vec<i64> = Vec::with_capacity(dotted.len());
    for (dot, v) in dotted {
        match dots.last() {
            Some(&last) if last == dot => *sums.last_mut().unwrap() += v,
            _ => {
                if sums.last() == Some(&0) {
                    dots.pop();
                    sums.pop();
                }
                dots.push(dot);
                sums.push(v);
            }
        }
    }
    if sums.last() == Some(&0) {
        dots.pop();
        sums.pop();
    }
    (dots, sums)
}

fn running_sums(jumps: &[i64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(jumps.len() + 1);
    let mut acc = 0;
    out.push(acc);
    for j in jumps {
        acc += j;
        out.push(acc);
    }
    out
}

pub fn ect_curve(grid: &CubicalGrid, table: &CriticalTable, xi: &Direction) -> Result<EctCurve> {
    check_inputs(grid, table, xi)?;
    let set = table.get(xi.sign_vector());
    let (breakpoints, jumps) = merge_by_dot(
        grid,
        xi.coords(),
        set.classical_points(),
        set.classical_values(),
    );
    Ok(EctCurve {
        values: running_sums(&jumps),
        breakpoints,
    })
}

pub fn radon_rep(grid: &CubicalGrid, table: &CriticalTable, xi: &Direction) -> Result<RadonRep> {
    check_inputs(grid, table, xi)?;
    let set = table.get(xi.sign_vector());
    let (ordinary_breakpoints, jumps) = merge_by_dot(
        grid,
        xi.coords(),
        set.ordinary_points(),
        set.ordinary_jumps(),
    );
    let cumulative = running_sums(&jumps);
    let (classical_dots, classical_jumps) = merge_by_dot(
        grid,
        xi.coords(),
        set.classical_points(),
        set.classical_values(),
    );
    let values_at_dots = classical_dots
        .iter()
        .zip(&classical_jumps)
        .map(|(&dot, &jump)| cumulative[ordinary_breakpoints.partition_point(|&b| b < dot)] + jump)
        .collect();
    Ok(RadonRep {
        ordinary_breakpoints,
        cumulative,
        classical_dots,
        values_at_dots,
    })
}

/// `∫ κ(t) Radon(ξ, t) dt`.
pub fn ht<K: KernelPrimitive + ?Sized>(
    grid: &CubicalGrid,
    table: &CriticalTable,
    xi: &Direction,
    kernel: &K,
) -> Result<Complex64> {
    check_inputs(grid, table, xi)?;
    let set = table.get(xi.sign_vector());
    let mut acc = Complex64::new(0.0, 0.0);
    for (&key, &jump) in set.ordinary_points().iter().zip(set.ordinary_jumps()) {
        acc -= kernel.primitive(grid.dot_unchecked(key, xi.coords()))? * jump as f64;
    }
    Ok(acc)
}
