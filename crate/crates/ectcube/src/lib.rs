//! File formats, threaded batch runners and the `ectcube` command line on top
//! of [`ectcube_core`].

pub mod bench;
pub mod cli;
pub mod directions;
mod error;
pub mod formats;
pub mod parallel;
pub mod pipeline;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
