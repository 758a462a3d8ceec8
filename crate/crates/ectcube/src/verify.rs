//! Cross-checks of emitted values against the full-scan oracle.

use ectcube_core::oracle::{oracle_ect, oracle_ht, oracle_radon};
use ectcube_core::{Complex64, CubicalGrid, Direction, EctCurve, KernelPrimitive, RadonRep};

use crate::error::{Error, Result};

/// Breakpoints, midpoints between consecutive ones, and one point beyond each
/// end. Every piece of a step function on these breakpoints is hit.
pub fn probe_points(breakpoints: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut pts: Vec<f64> = breakpoints.into_iter().collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let Some((&first, &last)) = pts.first().zip(pts.last()) else {
        return vec![0.0];
    };
    let mids: Vec<f64> = pts.windows(2).map(|w| w[0] + 0.5 * (w[1] - w[0])).collect();
    pts.extend(mids);
    pts.push(first - 1.0);
    pts.push(last + 1.0);
    pts
}

fn mismatch(what: &str, xi: &Direction, t: f64, got: i64, want: i64) -> Error {
    Error::OracleMismatch(format!(
        "{what} at t = {t} for direction {:?}: representation gives {got}, oracle gives {want}",
        xi.coords()
    ))
}

pub fn check_ect(grid: &CubicalGrid, xi: &Direction, curve: &EctCurve) -> Result<()> {
    for t in probe_points(curve.breakpoints().iter().copied()) {
        let (got, want) = (curve.evaluate(t), oracle_ect(grid, xi, t)?);
        if got != want {
            return Err(mismatch("ECT", xi, t, got, want));
        }
    }
    Ok(())
}

pub fn check_radon(grid: &CubicalGrid, xi: &Direction, rep: &RadonRep) -> Result<()> {
    let all = rep
        .ordinary_breakpoints()
        .iter()
        .chain(rep.classical_dots())
        .copied();
    for t in probe_points(all) {
        let (got, want) = (rep.evaluate(t), oracle_radon(grid, xi, t)?);
        if got != want {
            return Err(mismatch("Radon", xi, t, got, want));
        }
    }
    Ok(())
}

/// Pointwise check of a vectorization against the oracle.
pub fn check_samples(
    grid: &CubicalGrid,
    xi: &Direction,
    radon: bool,
    ts: &[f64],
    values: &[i64],
) -> Result<()> {
    for (&t, &got) in ts.iter().zip(values) {
        let want = if radon {
            oracle_radon(grid, xi, t)?
        } else {
            oracle_ect(grid, xi, t)?
        };
        if got != want {
            return Err(mismatch(
                if radon { "Radon sample" } else { "ECT sample" },
                xi,
                t,
                got,
                want,
            ));
        }
    }
    Ok(())
}

/// Relative tolerance `1e-9 (1 + |oracle|)`.
pub fn check_ht<K: KernelPrimitive + ?Sized>(
    grid: &CubicalGrid,
    xi: &Direction,
    kernel: &K,
    value: Complex64,
) -> Result<()> {
    let want = oracle_ht(grid, xi, kernel)?;
    let diff = value - want;
    if diff.re.hypot(diff.im) > 1e-9 * (1.0 + want.re.hypot(want.im)) {
        return Err(Error::OracleMismatch(format!(
            "HT for direction {:?}: representation gives {value}, oracle gives {want}",
            xi.coords()
        )));
    }
    Ok(())
}
