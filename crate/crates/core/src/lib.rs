//! Young's double slit with single trapped atoms as slits.
//!
//! Photons scattered by harmonically trapped atoms leave a recoil record in
//! the atomic motion. This crate builds the resulting two-path states for
//! rigid, independent, single, longitudinally mobile and coupled slits,
//! computes fringe patterns and visibilities, and applies the operations
//! that erase or bypass the which-way record.

pub mod acceptance;
pub mod cli;
pub mod error;
pub mod fockspace;
pub mod oracle;
pub mod scenarios;
pub mod transforms;
pub mod twopath;

pub use error::{Error, Result};
pub use scenarios::{build, Config, Pulse, ScenarioSpec, Treatment};
pub use twopath::{PatternScan, TwoPathComponent, TwoPathMixture};

/// Crate version, echoed into reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
