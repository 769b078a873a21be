//! Image complexity measures, physical complexity of layered forms,
//! correlation statistics and a per-comparison Glicko rating engine.

pub mod datasets;
pub mod error;
pub mod geometry;
pub mod imaging;
pub mod measures;
pub mod ranking;
pub mod simulate;
pub mod stats;

pub use error::{Error, Result};
