//! Fuzzy c-means clustering with membership scaling and triangle-inequality
//! acceleration, plus validity metrics, rank statistics, synthetic data
//! generation, and benchmark reporting.
//!
//! The `parallel` feature (on by default) runs the per-sample kernels on a
//! rayon pool; results are bit-identical to the sequential build.

pub mod bench;
pub mod datagen;
pub mod dist;
pub mod engine;
pub mod error;
pub mod init;
pub mod io;
pub mod metrics;
mod par;
pub mod report;
pub mod rng;
pub mod stats;
pub mod types;

pub use error::{Error, Result};
pub use types::{Algorithm, Dataset, InitMethod, RunConfig, RunTrace};
