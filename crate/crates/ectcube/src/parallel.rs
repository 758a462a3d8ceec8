//! Multi-threaded preprocessing and direction batches.
//!
//! Work is split into contiguous chunks, one per thread, and the results are
//! joined in chunk order, so the output never depends on the thread count.

use std::ops::Range;
use std::thread;

use ectcube_core::critical::{preprocess_vertices, CriticalTable};
use ectcube_core::transforms::ht;
use ectcube_core::{Complex64, CubicalGrid, Direction, KernelPrimitive};

use crate::error::{Error, Result};

/// `len` items split into at most `parts` contiguous, near-equal ranges.
pub fn chunks(len: usize, parts: usize) -> Vec<Range<usize>> {
    let parts = parts.clamp(1, len.max(1));
    let (base, extra) = (len / parts, len % parts);
    let mut start = 0;
    (0..parts)
        .map(|i| {
            let end = start + base + usize::from(i < extra);
            let r = start..end;
            start = end;
            r
        })
        .collect()
}

/// Same table as [`ectcube_core::critical::preprocess`], with the vertices
/// split across `threads` workers.
pub fn preprocess_parallel(grid: &CubicalGrid, threads: usize) -> CriticalTable {
    let ranges = chunks(grid.vertex_count(), threads);
    if ranges.len() == 1 {
        return preprocess_vertices(grid, ranges[0].clone());
    }
    let parts = thread::scope(|s| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| s.spawn(move || preprocess_vertices(grid, r)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("preprocessing worker panicked"))
            .collect::<Vec<_>>()
    });
    CriticalTable::concat(grid.ndim(), parts)
}

/// Applies `f` to every item on `threads` workers; output order is input order.
pub fn map_ordered<T, U, F>(items: &[T], threads: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    let ranges = chunks(items.len(), threads);
    if ranges.len() == 1 {
        return items.iter().map(&f).collect();
    }
    let f = &f;
    thread::scope(|s| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| s.spawn(move || items[r].iter().map(f).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("batch worker panicked"))
            .collect()
    })
}

/// Hybrid transform of every direction. Raw coordinates are validated first
/// and the first non-generic direction is reported by index.
pub fn ht_batch<K>(
    grid: &CubicalGrid,
    table: &CriticalTable,
    directions: &[Vec<f64>],
    kernel: &K,
    threads: usize,
) -> Result<Vec<Complex64>>
where
    K: KernelPrimitive + Sync + ?Sized,
{
    let dirs = crate::directions::validate(directions)?;
    map_ordered(&dirs, threads, |xi: &Direction| ht(grid, table, xi, kernel))
        .into_iter()
        .enumerate()
        .map(|(index, r)| r.map_err(|source| Error::Direction { index, source }))
        .collect()
}
