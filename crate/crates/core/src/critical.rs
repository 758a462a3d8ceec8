//! Critical points of a weighted cubical complex for every sign vector.
//!
//! For a vertex `x` and a sign vector `ε`, the lower star is the set of cells
//! having `x` as their `ε`-maximal vertex and the upper star the set of cells
//! having it as their `ε`-minimal vertex. On the doubled grid these are the
//! cells at `u - δ∘ε` and `u + δ∘ε` for `δ ∈ {0,1}^n`, where `u` is the vertex.
//!
//! For each vertex we store
//!
//! * `Δ⁻(ε, x) = χ(lower star)`, the jump of the Euler characteristic curve at
//!   `⟨ξ, x⟩`; `x` is classical critical when it is non-zero;
//! * `J(ε, x) = χ(lower star) - χ(upper star)`, the right-minus-left jump of the
//!   Radon curve at `⟨ξ, x⟩`; `x` is ordinary critical when it is non-zero.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::grid::CubicalGrid;
use crate::{Error, Result};

/// Element of `{±1}^n`, indexed by the bitmask with bit `i` set iff `ε_i = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    index: usize,
    ndim: usize,
}

impl SignVector {
    pub fn from_index(index: usize, ndim: usize) -> Self {
        assert!(
            ndim < usize::BITS as usize,
            "too many axes for a sign vector"
        );
        assert!(index < 1 << ndim, "sign vector index {index} out of range");
        Self { index, ndim }
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let mut index = 0;
        for (axis, &s) in signs.iter().enumerate() {
            match s {
                1 => index |= 1 << axis,
                -1 => {}
                _ => {
                    return Err(Error::InvalidParameter(alloc::format!(
                        "sign vector entry {s} on axis {axis} is not ±1"
                    )))
                }
            }
        }
        Ok(Self::from_index(index, signs.len()))
    }

    /// Every sign vector of dimension `ndim` in ascending index order.
    pub fn all(ndim: usize) -> impl Iterator<Item = Self> {
        (0..1usize << ndim).map(move |index| Self::from_index(index, ndim))
    }

    pub fn index(self) -> usize {
        self.index
    }

    pub fn ndim(self) -> usize {
        self.ndim
    }

    pub fn component(self, axis: usize) -> i8 {
        if self.index >> axis & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn components(self) -> Vec<i8> {
        (0..self.ndim).map(|axis| self.component(axis)).collect()
    }

    pub fn negated(self) -> Self {
        Self {
            index: !self.index & ((1 << self.ndim) - 1),
            ndim: self.ndim,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarSide {
    Lower,
    Upper,
}

/// Critical points of one sign vector. Point arrays are strictly ascending in
/// vertex key and every stored value is non-zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CriticalSet {
    classical_points: Vec<usize>,
    classical_values: Vec<i64>,
    ordinary_points: Vec<usize>,
    ordinary_jumps: Vec<i64>,
}

impl CriticalSet {
    pub fn classical_points(&self) -> &[usize] {
        &self.classical_points
    }

    /// `Δ⁻`, aligned with [`classical_points`](Self::classical_points).
    pub fn classical_values(&self) -> &[i64] {
        &self.classical_values
    }

    pub fn ordinary_points(&self) -> &[usize] {
        &self.ordinary_points
    }

    /// `J`, aligned with [`ordinary_points`](Self::ordinary_points).
    pub fn ordinary_jumps(&self) -> &[i64] {
        &self.ordinary_jumps
    }

    pub fn classical_count(&self) -> usize {
        self.classical_points.len()
    }

    pub fn ordinary_count(&self) -> usize {
        self.ordinary_points.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalTable {
    ndim: usize,
    sets: Vec<CriticalSet>,
}

impl CriticalTable {
    pub fn ndim(&self) -> usize {
        self.ndim
    }

    pub fn get(&self, sign: SignVector) -> &CriticalSet {
        assert_eq!(sign.ndim(), self.ndim, "sign vector dimension mismatch");
        &self.sets[sign.index()]
    }

    /// Per sign vector, in ascending index order.
    pub fn sets(&self) -> &[CriticalSet] {
        &self.sets
    }

    /// Concatenates tables computed on consecutive vertex ranges, in order.
    pub fn concat(ndim: usize, parts: impl IntoIterator<Item = CriticalTable>) -> Self {
        let mut out = Self {
            ndim,
            sets: vec![CriticalSet::default(); 1 << ndim],
        };
        for part in parts {
            assert_eq!(part.ndim, ndim, "partial tables of different dimensions");
            for (dst, src) in out.sets.iter_mut().zip(part.sets) {
                debug_assert!(
                    match (dst.classical_points.last(), src.classical_points.first()) {
                        (Some(a), Some(b)) => a < b,
                        _ => true,
                    }
                );
                dst.classical_points.extend(src.classical_points);
                dst.classical_values.extend(src.classical_values);
                dst.ordinary_points.extend(src.ordinary_points);
                dst.ordinary_jumps.extend(src.ordinary_jumps);
            }
        }
        out
    }
}

/// Signed key offsets of the star cells of a vertex, for every sign vector.
struct StarOffsets {
    ndim: usize,
    /// `lower[e][δ]`: offset of `u - δ∘ε`.
    lower: Vec<Vec<isize>>,
}

impl StarOffsets {
    fn new(grid: &CubicalGrid) -> Self {
        let ndim = grid.ndim();
        let lower = (0..1usize << ndim)
            .map(|e| lower_offsets(grid.strides(), e))
            .collect();
        Self { ndim, lower }
    }

    /// The upper star of `ε` is the lower star of `-ε`.
    fn offsets(&self, e: usize, side: StarSide) -> &[isize] {
        match side {
            StarSide::Lower => &self.lower[e],
            StarSide::Upper => &self.lower[!e & ((1 << self.ndim) - 1)],
        }
    }
}

/// Offsets of `u - δ∘ε` for every `δ`, where `e` indexes `ε`.
fn lower_offsets(strides: &[usize], e: usize) -> Vec<isize> {
    (0..1usize << strides.len())
        .map(|delta| {
            (0..strides.len())
                .filter(|&axis| delta >> axis & 1 == 1)
                .map(|axis| {
                    let s = strides[axis] as isize;
                    if e >> axis & 1 == 1 {
                        -s
                    } else {
                        s
                    }
                })
                .sum()
        })
        .collect()
}

/// Axes along which a vertex may step down and up without leaving the grid.
fn step_masks(grid: &CubicalGrid, key: usize) -> (usize, usize) {
    let (mut down, mut up) = (0, 0);
    for (axis, (&s, &d)) in grid.strides().iter().zip(grid.extents()).enumerate() {
        let u = (key / s) % d;
        if u > 0 {
            down |= 1 << axis;
        }
        if u + 1 < d {
            up |= 1 << axis;
        }
    }
    (down, up)
}

fn star_sum(values: &[i32], key: usize, offsets: &[isize], mask: usize) -> i64 {
    let mut acc = 0i64;
    let mut delta = mask;
    loop {
        let v = i64::from(values[(key as isize + offsets[delta]) as usize]);
        if delta.count_ones().is_multiple_of(2) {
            acc += v;
        } else {
            acc -= v;
        }
        if delta == 0 {
            return acc;
        }
        delta = (delta - 1) & mask;
    }
}

/// Axes the star of `ε` may extend along on `side`; out-of-grid cells are
/// skipped.
fn side_mask(e: usize, side: StarSide, down: usize, up: usize) -> usize {
    match side {
        StarSide::Lower => (down & e) | (up & !e),
        StarSide::Upper => (up & e) | (down & !e),
    }
}

/// Euler characteristic of the lower or upper star of a vertex.
pub fn star_chi(grid: &CubicalGrid, key: usize, sign: SignVector, side: StarSide) -> Result<i64> {
    if !grid.is_vertex(key) {
        return Err(if key >= grid.cell_count() {
            Error::KeyOutOfRange {
                key,
                len: grid.cell_count(),
            }
        } else {
            Error::NotAVertex(key)
        });
    }
    if sign.ndim() != grid.ndim() {
        return Err(Error::DimensionMismatch {
            expected: grid.ndim(),
            actual: sign.ndim(),
        });
    }
    let e = match side {
        StarSide::Lower => sign.index(),
        StarSide::Upper => sign.negated().index(),
    };
    let offsets = lower_offsets(grid.strides(), e);
    let (down, up) = step_masks(grid, key);
    Ok(star_sum(
        grid.values(),
        key,
        &offsets,
        side_mask(sign.index(), side, down, up),
    ))
}

/// Critical points and values of every sign vector.
pub fn preprocess(grid: &CubicalGrid) -> CriticalTable {
    preprocess_vertices(grid, 0..grid.vertex_count())
}

/// Critical points among the vertices whose row-major ordinals lie in
/// `ordinals`. Tables of consecutive ranges can be joined with
/// [`CriticalTable::concat`] to reproduce [`preprocess`] exactly.
pub fn preprocess_vertices(grid: &CubicalGrid, ordinals: Range<usize>) -> CriticalTable {
    let ndim = grid.ndim();
    let offsets = StarOffsets::new(grid);
    let values = grid.values();
    let mut sets = vec![CriticalSet::default(); 1 << ndim];
    for ordinal in ordinals {
        let key = grid.vertex_key(ordinal);
        let (down, up) = step_masks(grid, key);
        for (e, set) in sets.iter_mut().enumerate() {
            let lower = star_sum(
                values,
                key,
                offsets.offsets(e, StarSide::Lower),
                side_mask(e, StarSide::Lower, down, up),
            );
            let upper = star_sum(
                values,
                key,
                offsets.offsets(e, StarSide::Upper),
                side_mask(e, StarSide::Upper, down, up),
            );
            if lower != 0 {
                set.classical_points.push(key);
                set.classical_values.push(lower);
            }
            let jump = lower - upper;
            if jump != 0 {
                set.ordinary_points.push(key);
                set.ordinary_jumps.push(jump);
            }
        }
    }
    CriticalTable { ndim, sets }
}

/// Critical point counts per sign vector, with their mean and population
/// standard deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalStats {
    pub classical_counts: Vec<usize>,
    pub ordinary_counts: Vec<usize>,
    pub classical_mean: f64,
    pub classical_std: f64,
    pub ordinary_mean: f64,
    pub ordinary_std: f64,
}

pub fn critical_stats(table: &CriticalTable) -> CriticalStats {
    let classical_counts: Vec<usize> = table
        .sets()
        .iter()
        .map(CriticalSet::classical_count)
        .collect();
    let ordinary_counts: Vec<usize> = table
        .sets()
        .iter()
        .map(CriticalSet::ordinary_count)
        .collect();
    let (classical_mean, classical_std) = mean_std(&classical_counts);
    let (ordinary_mean, ordinary_std) = mean_std(&ordinary_counts);
    CriticalStats {
        classical_counts,
        ordinary_counts,
        classical_mean,
        classical_std,
        ordinary_mean,
        ordinary_std,
    }
}

fn mean_std(counts: &[usize]) -> (f64, f64) {
    if counts.is_empty() {
        return (0.0, 0.0);
    }
    let n = counts.len() as f64;
    let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / n;
    let var = counts
        .iter()
        .map(|&c| (c as f64 - mean) * (c as f64 - mean))
        .sum::<f64>()
        / n;
    (mean, libm::sqrt(var))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::tests::ex4;
    use crate::grid::ImageTensor;
    use proptest::prelude::*;

    fn sv(signs: &[i8]) -> SignVector {
        SignVector::from_signs(signs).unwrap()
    }

    /// Star sums straight from the definition: enumerate `δ`, skip cells that
    /// fall off the grid.
    fn naive_star(grid: &CubicalGrid, key: usize, sign: SignVector, side: StarSide) -> i64 {
        let u = grid.key_to_coords(key).unwrap();
        let n = grid.ndim();
        let mut acc = 0;
        'delta: for delta in 0..1usize << n {
            let mut c = u.clone();
            for axis in 0..n {
                if delta >> axis & 1 == 1 {
                    let step = sign.component(axis) as isize
                        * if side == StarSide::Lower { -1 } else { 1 };
                    let w = c[axis] as isize + step;
                    if w < 0 || w as usize >= grid.extents()[axis] {
                        continue 'delta;
                    }
                    c[axis] = w as usize;
                }
            }
            let v = i64::from(grid.value(grid.coords_to_key(&c).unwrap()).unwrap());
            acc += if delta.count_ones() % 2 == 0 { v } else { -v };
        }
        acc
    }

    #[test]
    fn sign_vector_indexing() {
        let s = sv(&[1, -1, 1]);
        assert_eq!(s.index(), 0b101);
        assert_eq!(s.components(), vec![1, -1, 1]);
        assert_eq!(s.negated().components(), vec![-1, 1, -1]);
        assert!(SignVector::from_signs(&[1, 0]).is_err());
        assert_eq!(
            SignVector::all(2).map(|s| s.index()).collect::<Vec<_>>(),
            vec![0, 1, 2, 3]
        );
    }

    #[test]
    fn ex4_star_sums() {
        let g = ex4();
        let s = sv(&[-1, 1]);
        assert_eq!(star_chi(&g, 32, s, StarSide::Lower).unwrap(), 0);
        assert_eq!(star_chi(&g, 32, s, StarSide::Upper).unwrap(), -1);
        assert_eq!(
            star_chi(&g, 31, s, StarSide::Lower),
            Err(Error::NotAVertex(31))
        );
        assert!(star_chi(&g, 32, sv(&[1]), StarSide::Lower).is_err());
    }

    #[test]
    fn isolated_vertex_star_is_its_value() {
        let g = CubicalGrid::from_vertex_values(
            &ImageTensor::new(vec![3, 3], vec![0, 0, 0, 0, 7, 0, 0, 0, 0]).unwrap(),
        );
        let centre = g.coords_to_key(&[2, 2]).unwrap();
        for s in SignVector::all(2) {
            assert_eq!(star_chi(&g, centre, s, StarSide::Lower).unwrap(), 7);
            assert_eq!(star_chi(&g, centre, s, StarSide::Upper).unwrap(), 7);
        }
    }

    #[test]
    fn ex4_table() {
        let t = preprocess(&ex4());
        let pp = t.get(sv(&[1, 1]));
        assert_eq!(pp.classical_points(), &[0, 16, 28, 30]);
        assert_eq!(pp.classical_values(), &[1, 1, 1, -1]);
        assert_eq!(pp.ordinary_points(), &[16, 28, 34, 44]);
        assert_eq!(pp.ordinary_jumps(), &[1, 1, -1, -1]);
        let stats = critical_stats(&t);
        assert_eq!(stats.classical_counts, vec![4, 4, 2, 4]);
        assert_eq!(stats.ordinary_counts, vec![4, 4, 4, 4]);
        assert_eq!(stats.ordinary_mean, 4.0);
        assert_eq!(stats.ordinary_std, 0.0);
        assert!((stats.classical_mean - 3.5).abs() < 1e-15);
    }

    #[test]
    fn single_edge_jumps() {
        let g = CubicalGrid::from_cells(vec![3], vec![1, 1, 1]).unwrap();
        let t = preprocess(&g);
        let up = t.get(sv(&[1]));
        assert_eq!(up.classical_points(), &[0]);
        assert_eq!(up.classical_values(), &[1]);
        assert_eq!(up.ordinary_points(), &[0, 2]);
        assert_eq!(up.ordinary_jumps(), &[1, -1]);
        let down = t.get(sv(&[-1]));
        assert_eq!(down.classical_points(), &[2]);
        assert_eq!(down.ordinary_jumps(), &[-1, 1]);
    }

    #[test]
    fn zero_grid_has_no_critical_points() {
        let g =
            CubicalGrid::from_vertex_values(&ImageTensor::new(vec![3, 4], vec![0; 12]).unwrap());
        let stats = critical_stats(&preprocess(&g));
        assert!(stats
            .classical_counts
            .iter()
            .chain(&stats.ordinary_counts)
            .all(|&c| c == 0));
    }

    #[test]
    fn chunked_preprocessing_matches() {
        let g = ex4();
        let whole = preprocess(&g);
        let v = g.vertex_count();
        for cut in [0, 1, 5, 15, 16] {
            let parts = [
                preprocess_vertices(&g, 0..cut),
                preprocess_vertices(&g, cut..v),
            ];
            assert_eq!(CriticalTable::concat(2, parts), whole);
        }
    }

    fn small_grid() -> impl Strategy<Value = CubicalGrid> {
        (prop::collection::vec(1usize..=4, 1..=3), any::<bool>()).prop_flat_map(|(shape, top)| {
            let len: usize = shape.iter().product();
            prop::collection::vec(-2i32..=3, len).prop_map(move |values| {
                let img = ImageTensor::new(shape.clone(), values).unwrap();
                if top {
                    CubicalGrid::from_top_values(&img)
                } else {
                    CubicalGrid::from_vertex_values(&img)
                }
            })
        })
    }

    proptest! {
        #[test]
        fn table_invariants(g in small_grid()) {
            let t = preprocess(&g);
            let chi = g.euler_characteristic();
            for s in SignVector::all(g.ndim()) {
                let set = t.get(s);
                prop_assert_eq!(set.classical_values().iter().sum::<i64>(), chi);
                prop_assert_eq!(set.ordinary_jumps().iter().sum::<i64>(), 0);
                prop_assert!(set.classical_values().iter().all(|&v| v != 0));
                prop_assert!(set.ordinary_jumps().iter().all(|&v| v != 0));
                prop_assert!(set.classical_points().windows(2).all(|w| w[0] < w[1]));
                prop_assert!(set.ordinary_points().windows(2).all(|w| w[0] < w[1]));
                let anti = t.get(s.negated());
                prop_assert_eq!(anti.ordinary_points(), set.ordinary_points());
                for (a, b) in anti.ordinary_jumps().iter().zip(set.ordinary_jumps()) {
                    prop_assert_eq!(*a, -*b);
                }
            }
        }

        #[test]
        fn star_sums_match_definition(g in small_grid()) {
            for key in g.vertex_keys() {
                for s in SignVector::all(g.ndim()) {
                    for side in [StarSide::Lower, StarSide::Upper] {
                        prop_assert_eq!(star_chi(&g, key, s, side).unwrap(), naive_star(&g, key, s, side));
                    }
                }
            }
        }
    }
}
