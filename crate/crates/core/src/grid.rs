//! Weighted cubical complexes stored as doubled-grid bitmaps.
//!
//! A complex with `m_0 × … × m_{n-1}` vertices lives on a grid of doubled
//! extents `d_i = 2 m_i - 1`. A cell is addressed by its doubled coordinates
//! `u`; the number of odd components of `u` is its dimension and the
//! all-even cells are the vertices. Cells are numbered row-major with the last
//! axis varying fastest.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Row-major (last axis fastest) integer image of any dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageTensor {
    shape: Vec<usize>,
    values: Vec<i32>,
}

impl ImageTensor {
    pub fn new(shape: Vec<usize>, values: Vec<i32>) -> Result<Self> {
        if shape.is_empty() {
            return Err(Error::InvalidShape(
                "an image needs at least one axis".into(),
            ));
        }
        if let Some(axis) = shape.iter().position(|&m| m == 0) {
            return Err(Error::InvalidShape(format!("axis {axis} has zero extent")));
        }
        let len = checked_product(&shape)?;
        if len != values.len() {
            return Err(Error::InvalidShape(format!(
                "shape {shape:?} needs {len} values, got {}",
                values.len()
            )));
        }
        Ok(Self { shape, values })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn ndim(&self) -> usize {
        self.shape.len()
    }

    pub fn into_parts(self) -> (Vec<usize>, Vec<i32>) {
        (self.shape, self.values)
    }
}

/// How vertices are placed in `R^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmbeddingMode {
    /// Evenly spaced in `[-0.5, 0.5]` along every axis; `0` on axes with a
    /// single vertex.
    #[default]
    Normalized,
    /// The integer vertex index itself. Dot products with integer directions
    /// are then exact, so ties are detected exactly.
    Lattice,
}

/// Position of a vertex in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedPoint {
    pub coords: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicalGrid {
    extents: Vec<usize>,
    strides: Vec<usize>,
    values: Vec<i32>,
    embedding: EmbeddingMode,
}

impl CubicalGrid {
    /// Builds a grid from raw cell values on doubled extents, which must all be
    /// odd. No closure property is enforced.
    pub fn from_cells(extents: Vec<usize>, values: Vec<i32>) -> Result<Self> {
        if extents.is_empty() {
            return Err(Error::InvalidShape("a grid needs at least one axis".into()));
        }
        if let Some(axis) = extents.iter().position(|&d| d % 2 == 0) {
            return Err(Error::InvalidShape(format!(
                "doubled extent {} on axis {axis} is not odd",
                extents[axis]
            )));
        }
        let len = checked_product(&extents)?;
        if len != values.len() {
            return Err(Error::InvalidShape(format!(
                "extents {extents:?} need {len} cells, got {}",
                values.len()
            )));
        }
        let strides = strides_of(&extents);
        Ok(Self {
            extents,
            strides,
            values,
            embedding: EmbeddingMode::default(),
        })
    }

    /// Dual construction: pixels become vertices and every higher cell takes the
    /// minimum over its vertices.
    pub fn from_vertex_values(img: &ImageTensor) -> Self {
        let extents: Vec<usize> = img.shape().iter().map(|&m| 2 * m - 1).collect();
        let mut grid = Self::zeroed(extents);
        for (ordinal, &v) in img.values().iter().enumerate() {
            let key = grid.vertex_key(ordinal);
            grid.values[key] = v;
        }
        // Pass `axis` fills every cell that is odd along `axis` from its two
        // neighbours along it. A cell's value is final after the pass of its
        // last odd axis.
        for axis in 0..grid.ndim() {
            let stride = grid.strides[axis];
            let extent = grid.extents[axis];
            for key in 0..grid.values.len() {
                if (key / stride) % extent % 2 == 1 {
                    grid.values[key] = grid.values[key - stride].min(grid.values[key + stride]);
                }
            }
        }
        grid
    }

    /// Pixels become top-dimensional cells and every lower cell takes the
    /// minimum over its cofaces.
    pub fn from_top_values(img: &ImageTensor) -> Self {
        let extents: Vec<usize> = img.shape().iter().map(|&m| 2 * m + 1).collect();
        let mut grid = Self::zeroed(extents);
        let mut pixel = vec![0usize; img.ndim()];
        for &v in img.values() {
            let key: usize = pixel
                .iter()
                .zip(&grid.strides)
                .map(|(&p, &s)| (2 * p + 1) * s)
                .sum();
            grid.values[key] = v;
            advance(&mut pixel, img.shape());
        }
        for axis in 0..grid.ndim() {
            let stride = grid.strides[axis];
            let extent = grid.extents[axis];
            for key in 0..grid.values.len() {
                let u = (key / stride) % extent;
                if u.is_multiple_of(2) {
                    let below = (u > 0).then(|| grid.values[key - stride]);
                    let above = (u + 1 < extent).then(|| grid.values[key + stride]);
                    grid.values[key] = match (below, above) {
                        (Some(a), Some(b)) => a.min(b),
                        (Some(a), None) | (None, Some(a)) => a,
                        (None, None) => unreachable!("top extents are at least 3"),
                    };
                }
            }
        }
        grid
    }

    fn zeroed(extents: Vec<usize>) -> Self {
        let len = extents.iter().product();
        let strides = strides_of(&extents);
        Self {
            extents,
            strides,
            values: vec![0; len],
            embedding: EmbeddingMode::default(),
        }
    }

    pub fn with_embedding(mut self, embedding: EmbeddingMode) -> Self {
        self.embedding = embedding;
        self
    }

    pub fn embedding(&self) -> EmbeddingMode {
        self.embedding
    }

    pub fn ndim(&self) -> usize {
        self.extents.len()
    }

    /// Doubled extents `d_i`.
    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Number of vertices along each axis, `(d_i + 1) / 2`.
    pub fn vertex_extents(&self) -> Vec<usize> {
        self.extents.iter().map(|&d| d.div_ceil(2)).collect()
    }

    pub fn cell_count(&self) -> usize {
        self.values.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.extents.iter().map(|&d| d.div_ceil(2)).product()
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn value(&self, key: usize) -> Result<i32> {
        self.check_key(key)?;
        Ok(self.values[key])
    }

    pub fn key_to_coords(&self, key: usize) -> Result<Vec<usize>> {
        self.check_key(key)?;
        Ok(self
            .strides
            .iter()
            .zip(&self.extents)
            .map(|(&s, &d)| (key / s) % d)
            .collect())
    }

    pub fn coords_to_key(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.ndim() {
            return Err(Error::DimensionMismatch {
                expected: self.ndim(),
                actual: coords.len(),
            });
        }
        let mut key = 0;
        for (axis, ((&u, &d), &s)) in coords
            .iter()
            .zip(&self.extents)
            .zip(&self.strides)
            .enumerate()
        {
            if u >= d {
                return Err(Error::CoordOutOfRange {
                    axis,
                    coord: u,
                    extent: d,
                });
            }
            key += u * s;
        }
        Ok(key)
    }

    pub fn cell_dim(&self, key: usize) -> Result<usize> {
        self.check_key(key)?;
        Ok(self.dim_unchecked(key))
    }

    pub(crate) fn dim_unchecked(&self, key: usize) -> usize {
        self.strides
            .iter()
            .zip(&self.extents)
            .filter(|(&s, &d)| (key / s) % d % 2 == 1)
            .count()
    }

    pub fn is_vertex(&self, key: usize) -> bool {
        key < self.values.len() && self.dim_unchecked(key) == 0
    }

    /// Key of the `ordinal`-th vertex in row-major vertex order. Vertex keys are
    /// increasing in the ordinal.
    pub fn vertex_key(&self, ordinal: usize) -> usize {
        let mut rest = ordinal;
        let mut key = 0;
        for axis in (0..self.ndim()).rev() {
            let m = self.extents[axis].div_ceil(2);
            key += 2 * (rest % m) * self.strides[axis];
            rest /= m;
        }
        key
    }

    /// All vertex keys in ascending order.
    pub fn vertex_keys(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).map(move |i| self.vertex_key(i))
    }

    fn axis_coordinate(&self, axis: usize, doubled: usize) -> f64 {
        let p = doubled / 2;
        match self.embedding {
            EmbeddingMode::Lattice => p as f64,
            EmbeddingMode::Normalized => {
                let m = self.extents[axis].div_ceil(2);
                if m == 1 {
                    0.0
                } else {
                    -0.5 + p as f64 / (m - 1) as f64
                }
            }
        }
    }

    pub fn vertex_embedding(&self, key: usize) -> Result<EmbeddedPoint> {
        self.check_vertex(key)?;
        let coords = (0..self.ndim())
            .map(|axis| self.axis_coordinate(axis, (key / self.strides[axis]) % self.extents[axis]))
            .collect();
        Ok(EmbeddedPoint { coords })
    }

    /// `⟨ξ, x⟩` for the vertex `key`.
    pub fn vertex_dot(&self, key: usize, xi: &[f64]) -> Result<f64> {
        self.check_vertex(key)?;
        self.check_direction(xi)?;
        Ok(self.dot_unchecked(key, xi))
    }

    /// Every dot product in the crate goes through here so that equal inputs
    /// always round the same way.
    pub(crate) fn dot_unchecked(&self, key: usize, xi: &[f64]) -> f64 {
        let mut acc = 0.0;
        for axis in 0..self.ndim() {
            let u = (key / self.strides[axis]) % self.extents[axis];
            acc += xi[axis] * self.axis_coordinate(axis, u);
        }
        acc
    }

    /// Vertex keys of the cell minimising and maximising `⟨ξ, ·⟩`.
    pub(crate) fn extremal_vertices(&self, key: usize, xi: &[f64]) -> (usize, usize) {
        let (mut lo, mut hi) = (key, key);
        for axis in 0..self.ndim() {
            let s = self.strides[axis];
            if (key / s) % self.extents[axis] % 2 == 1 {
                if xi[axis] > 0.0 {
                    lo -= s;
                    hi += s;
                } else {
                    lo += s;
                    hi -= s;
                }
            }
        }
        (lo, hi)
    }

    /// Minimum and maximum of `⟨ξ, ·⟩` over the vertices of a cell.
    pub fn cell_dot_range(&self, key: usize, xi: &[f64]) -> Result<(f64, f64)> {
        self.check_key(key)?;
        self.check_direction(xi)?;
        let (lo, hi) = self.extremal_vertices(key, xi);
        Ok((self.dot_unchecked(lo, xi), self.dot_unchecked(hi, xi)))
    }

    /// `Σ (-1)^dim(c) φ(c)` over all cells.
    pub fn euler_characteristic(&self) -> i64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(key, &v)| {
                if self.dim_unchecked(key).is_multiple_of(2) {
                    i64::from(v)
                } else {
                    -i64::from(v)
                }
            })
            .sum()
    }

    /// Cellwise sum of two grids with identical extents.
    pub fn cellwise_sum(&self, other: &Self) -> Result<Self> {
        if self.extents != other.extents {
            return Err(Error::InvalidShape(format!(
                "extents {:?} and {:?} differ",
                self.extents, other.extents
            )));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.wrapping_add(*b))
            .collect();
        Ok(Self {
            values,
            ..self.clone()
        })
    }

    fn check_key(&self, key: usize) -> Result<()> {
        if key >= self.values.len() {
            return Err(Error::KeyOutOfRange {
                key,
                len: self.values.len(),
            });
        }
        Ok(())
    }

    fn check_vertex(&self, key: usize) -> Result<()> {
        self.check_key(key)?;
        if self.dim_unchecked(key) != 0 {
            return Err(Error::NotAVertex(key));
        }
        Ok(())
    }

    pub(crate) fn check_direction(&self, xi: &[f64]) -> Result<()> {
        if xi.len() != self.ndim() {
            return Err(Error::DimensionMismatch {
                expected: self.ndim(),
                actual: xi.len(),
            });
        }
        Ok(())
    }
}

fn strides_of(extents: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; extents.len()];
    for axis in (0..extents.len().saturating_sub(1)).rev() {
        strides[axis] = strides[axis + 1] * extents[axis + 1];
    }
    strides
}

fn checked_product(extents: &[usize]) -> Result<usize> {
    extents
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::InvalidShape(format!("{extents:?} overflows the address space")))
}

/// Row-major odometer step.
pub(crate) fn advance(index: &mut [usize], shape: &[usize]) {
    for axis in (0..index.len()).rev() {
        index[axis] += 1;
        if index[axis] < shape[axis] {
            return;
        }
        index[axis] = 0;
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    /// 4×4 binary image whose dual complex has 9 vertices, 9 edges and 2
    /// squares of value 1.
    pub(crate) fn ex4() -> CubicalGrid {
        let img = ImageTensor::new(
            vec![4, 4],
            vec![1, 0, 0, 0, 0, 1, 1, 0, 1, 1, 1, 1, 1, 1, 0, 0],
        )
        .unwrap();
        CubicalGrid::from_vertex_values(&img)
    }

    #[test]
    fn ex4_cell_counts() {
        let g = ex4();
        assert_eq!(g.extents(), &[7, 7]);
        let mut by_dim = [0usize; 3];
        for key in 0..g.cell_count() {
            assert!(g.values()[key] == 0 || g.values()[key] == 1);
            if g.values()[key] == 1 {
                by_dim[g.cell_dim(key).unwrap()] += 1;
            }
        }
        assert_eq!(by_dim, [9, 9, 2]);
        let ones: Vec<usize> = g.vertex_keys().filter(|&k| g.values()[k] == 1).collect();
        assert_eq!(ones, vec![0, 16, 18, 28, 30, 32, 34, 42, 44]);
        assert_eq!(g.euler_characteristic(), 2);
    }

    #[test]
    fn vertex_construction_small_cases() {
        let g = CubicalGrid::from_vertex_values(&ImageTensor::new(vec![1], vec![5]).unwrap());
        assert_eq!(g.values(), &[5]);
        assert_eq!(g.euler_characteristic(), 5);
        let g = CubicalGrid::from_vertex_values(&ImageTensor::new(vec![2, 2], vec![1; 4]).unwrap());
        assert_eq!(g.values(), &[1; 9]);
        assert_eq!(g.euler_characteristic(), 1);
    }

    #[test]
    fn top_construction_small_cases() {
        let g = CubicalGrid::from_top_values(&ImageTensor::new(vec![1, 1], vec![7]).unwrap());
        assert_eq!(g.values(), &[7; 9]);
        let g = CubicalGrid::from_top_values(&ImageTensor::new(vec![2], vec![1, 2]).unwrap());
        assert_eq!(g.values(), &[1, 1, 1, 2, 2]);
        let g =
            CubicalGrid::from_top_values(&ImageTensor::new(vec![2, 2], vec![0, 1, 2, 3]).unwrap());
        assert_eq!(g.extents(), &[5, 5]);
        assert_eq!(g.values()[g.coords_to_key(&[2, 2]).unwrap()], 0);
        assert_eq!(g.values()[g.coords_to_key(&[3, 4]).unwrap()], 3);
    }

    #[test]
    fn key_coords() {
        let g = ex4();
        assert_eq!(g.key_to_coords(32).unwrap(), vec![4, 4]);
        assert_eq!(g.coords_to_key(&[0, 0]).unwrap(), 0);
        assert_eq!(g.coords_to_key(&[4, 3]).unwrap(), 31);
        assert_eq!(
            g.key_to_coords(49),
            Err(Error::KeyOutOfRange { key: 49, len: 49 })
        );
        assert_eq!(
            g.coords_to_key(&[7, 0]),
            Err(Error::CoordOutOfRange {
                axis: 0,
                coord: 7,
                extent: 7
            })
        );
        assert!(matches!(
            g.coords_to_key(&[1]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cell_dims() {
        let g = ex4();
        assert_eq!(g.cell_dim(32).unwrap(), 0);
        assert_eq!(g.cell_dim(0).unwrap(), 0);
        assert_eq!(g.cell_dim(38).unwrap(), 2);
        assert_eq!(g.cell_dim(17).unwrap(), 1);
        assert!(g.cell_dim(100).is_err());
    }

    #[test]
    fn embeddings() {
        let g = ex4();
        assert_eq!(g.vertex_embedding(0).unwrap().coords, vec![-0.5, -0.5]);
        let p = g.vertex_embedding(30).unwrap().coords;
        assert!((p[0] - 1.0 / 6.0).abs() < 1e-15 && (p[1] + 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(g.vertex_embedding(17), Err(Error::NotAVertex(17)));

        let flat =
            CubicalGrid::from_vertex_values(&ImageTensor::new(vec![1, 3], vec![1, 2, 3]).unwrap());
        assert_eq!(flat.vertex_embedding(4).unwrap().coords, vec![0.0, 0.5]);

        let lattice = ex4().with_embedding(EmbeddingMode::Lattice);
        assert_eq!(lattice.vertex_embedding(30).unwrap().coords, vec![2.0, 1.0]);
    }

    #[test]
    fn dot_ranges() {
        let g = ex4();
        let xi = [2.0, 2.0];
        let (lo, hi) = g.cell_dot_range(17, &xi).unwrap();
        assert!((lo + 2.0 / 3.0).abs() < 1e-12 && hi.abs() < 1e-12);
        assert_eq!(g.cell_dot_range(0, &xi).unwrap(), (-2.0, -2.0));
        let (lo, hi) = g.cell_dot_range(24, &xi).unwrap();
        assert!((lo + 2.0 / 3.0).abs() < 1e-12 && (hi - 2.0 / 3.0).abs() < 1e-12);
        // Negative coordinates swap the ends.
        let (lo, hi) = g.cell_dot_range(24, &[-2.0, 2.0]).unwrap();
        assert!((lo + 2.0 / 3.0).abs() < 1e-12 && (hi - 2.0 / 3.0).abs() < 1e-12);
        assert!(g.cell_dot_range(24, &[1.0]).is_err());
    }

    #[test]
    fn invalid_inputs() {
        assert!(ImageTensor::new(vec![], vec![]).is_err());
        assert!(ImageTensor::new(vec![2, 0], vec![]).is_err());
        assert!(ImageTensor::new(vec![2, 2], vec![1, 2, 3]).is_err());
        assert!(CubicalGrid::from_cells(vec![4], vec![0; 4]).is_err());
        assert!(CubicalGrid::from_cells(vec![3], vec![0; 4]).is_err());
    }

    fn small_image() -> impl Strategy<Value = ImageTensor> {
        prop::collection::vec(1usize..=4, 1..=3).prop_flat_map(|shape| {
            let len: usize = shape.iter().product();
            prop::collection::vec(-3i32..=3, len)
                .prop_map(move |values| ImageTensor::new(shape.clone(), values).unwrap())
        })
    }

    /// All cells whose doubled coordinates are within one step of `u` along the
    /// axes where `u` is odd.
    fn vertices_of(g: &CubicalGrid, key: usize) -> Vec<usize> {
        let u = g.key_to_coords(key).unwrap();
        let odd: Vec<usize> = (0..u.len()).filter(|&i| u[i] % 2 == 1).collect();
        (0..1usize << odd.len())
            .map(|mask| {
                let mut c = u.clone();
                for (bit, &axis) in odd.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        c[axis] += 1
                    } else {
                        c[axis] -= 1
                    }
                }
                g.coords_to_key(&c).unwrap()
            })
            .collect()
    }

    proptest! {
        #[test]
        fn key_coords_roundtrip(img in small_image(), pick in any::<prop::sample::Index>()) {
            let g = CubicalGrid::from_vertex_values(&img);
            let key = pick.index(g.cell_count());
            let coords = g.key_to_coords(key).unwrap();
            prop_assert_eq!(g.coords_to_key(&coords).unwrap(), key);
        }

        #[test]
        fn vertex_construction_is_min_over_vertices(img in small_image()) {
            let g = CubicalGrid::from_vertex_values(&img);
            for key in 0..g.cell_count() {
                let expected = vertices_of(&g, key).iter().map(|&v| g.values()[v]).min().unwrap();
                prop_assert_eq!(g.values()[key], expected);
            }
        }

        #[test]
        fn top_construction_is_min_over_cofaces(img in small_image()) {
            let g = CubicalGrid::from_top_values(&img);
            let n = g.ndim();
            for key in 0..g.cell_count() {
                let u = g.key_to_coords(key).unwrap();
                if g.cell_dim(key).unwrap() == n {
                    continue;
                }
                let mut cofaces = Vec::new();
                for axis in (0..n).filter(|&i| u[i].is_multiple_of(2)) {
                    for step in [-1isize, 1] {
                        let c = u[axis] as isize + step;
                        if c >= 0 && (c as usize) < g.extents()[axis] {
                            let mut w = u.clone();
                            w[axis] = c as usize;
                            cofaces.push(g.values()[g.coords_to_key(&w).unwrap()]);
                        }
                    }
                }
                prop_assert_eq!(g.values()[key], cofaces.into_iter().min().unwrap());
            }
        }

        #[test]
        fn full_block_is_contractible(shape in prop::collection::vec(1usize..=5, 1..=3)) {
            let len: usize = shape.iter().product();
            let g = CubicalGrid::from_vertex_values(&ImageTensor::new(shape, vec![1; len]).unwrap());
            prop_assert_eq!(g.euler_characteristic(), 1);
        }

        #[test]
        fn embedding_increases_along_axes(shape in prop::collection::vec(2usize..=6, 1..=3)) {
            let len: usize = shape.iter().product();
            let g = CubicalGrid::from_vertex_values(&ImageTensor::new(shape, vec![0; len]).unwrap());
            for key in g.vertex_keys() {
                let p = g.vertex_embedding(key).unwrap().coords;
                let u = g.key_to_coords(key).unwrap();
                for axis in 0..g.ndim() {
                    prop_assert!((-0.5..=0.5).contains(&p[axis]));
                    if u[axis] + 2 < g.extents()[axis] {
                        let mut w = u.clone();
                        w[axis] += 2;
                        let q = g.vertex_embedding(g.coords_to_key(&w).unwrap()).unwrap().coords;
                        prop_assert!(q[axis] > p[axis]);
                    }
                }
            }
        }
    }
}
