//! Reference transforms by a full scan over every cell.
//!
//! Each cell `P` with weight `φ(P)` and dot range `[lo, hi]` contributes
//!
//! * to the ECT at `t`: `(-1)^dim φ` once `t ≥ hi`,
//! * to the Radon transform at `t`: `φ` if `P` is a vertex with `⟨ξ,P⟩ = t`,
//!   else `(-1)^(dim-1) φ` for `lo < t < hi`,
//! * to the hybrid transform: `(-1)^(dim-1) φ (κ̄(hi) - κ̄(lo))` for `dim ≥ 1`.
//!
//! These only use the grid geometry, never the critical point tables, and cost
//! `O(#cells)` per query.

use num_complex::Complex64;

use crate::grid::CubicalGrid;
use crate::kernel::KernelPrimitive;
use crate::transforms::Direction;
use crate::Result;

fn signed(value: i32, dim: usize) -> i64 {
    if dim.is_multiple_of(2) {
        i64::from(value)
    } else {
        -i64::from(value)
    }
}

/// Non-zero cells as `(dim, value, lo, hi)`.
fn cells<'a>(
    grid: &'a CubicalGrid,
    xi: &'a [f64],
) -> impl Iterator<Item = (usize, i32, f64, f64)> + 'a {
    grid.values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(move |(key, &v)| {
            let (lo, hi) = grid.extremal_vertices(key, xi);
            (
                grid.dim_unchecked(key),
                v,
                grid.dot_unchecked(lo, xi),
                grid.dot_unchecked(hi, xi),
            )
        })
}

pub fn oracle_ect(grid: &CubicalGrid, xi: &Direction, t: f64) -> Result<i64> {
    grid.check_direction(xi.coords())?;
    Ok(cells(grid, xi.coords())
        .filter(|&(_, _, _, hi)| t >= hi)
        .map(|(dim, v, _, _)| signed(v, dim))
        .sum())
}

pub fn oracle_radon(grid: &CubicalGrid, xi: &Direction, t: f64) -> Result<i64> {
    grid.check_direction(xi.coords())?;
    Ok(cells(grid, xi.coords())
        .map(|(dim, v, lo, hi)| match dim {
            0 if lo == t => i64::from(v),
            0 => 0,
            _ if lo < t && t < hi => signed(v, dim - 1),
            _ => 0,
        })
        .sum())
}

pub fn oracle_ht<K: KernelPrimitive + ?Sized>(
    grid: &CubicalGrid,
    xi: &Direction,
    kernel: &K,
) -> Result<Complex64> {
    grid.check_direction(xi.coords())?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (dim, v, lo, hi) in cells(grid, xi.coords()).filter(|c| c.0 > 0) {
        acc += (kernel.primitive(hi)? - kernel.primitive(lo)?) * signed(v, dim - 1) as f64;
    }
    Ok(acc)
}
