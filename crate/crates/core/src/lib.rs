//! Exact topological integral transforms of weighted cubical complexes.
//!
//! A grayscale image of any dimension is turned into a weighted cubical
//! complex stored as a doubled-grid bitmap ([`grid`]). For each of the `2^n`
//! sign vectors the vertices whose lower or upper star changes the Euler
//! characteristic are collected once ([`critical`]). Any direction `ξ` with
//! non-zero coordinates then reuses the table of its sign vector to build exact
//! step-function representations of the Euler characteristic transform and of
//! the Radon transform, or to sum a hybrid transform against a kernel
//! ([`transforms`]).
//!
//! [`oracle`] recomputes every transform by a full scan over all cells and is
//! the reference the fast path is tested against.
//!
//! The crate is `no_std` and only needs `alloc`.
//!
//! ```
//! use ectcube_core::{critical, transforms, CubicalGrid, Direction, ImageTensor};
//!
//! let img = ImageTensor::new(vec![2, 2], vec![1, 1, 1, 0]).unwrap();
//! let grid = CubicalGrid::from_vertex_values(&img);
//! let table = critical::preprocess(&grid);
//! let xi = Direction::new(vec![1.0, 2.0]).unwrap();
//! let curve = transforms::ect_curve(&grid, &table, &xi).unwrap();
//! assert_eq!(curve.evaluate(10.0), grid.euler_characteristic());
//! ```
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod critical;
pub mod datagen;
mod error;
pub mod grid;
pub mod kernel;
pub mod oracle;
pub mod transforms;

pub use critical::{CriticalStats, CriticalTable, SignVector, StarSide};
pub use error::{Error, Result};
pub use grid::{CubicalGrid, EmbeddedPoint, EmbeddingMode, ImageTensor};
pub use kernel::{Kernel, KernelPrimitive};
pub use num_complex::Complex64;
pub use transforms::{Direction, EctCurve, RadonRep};
