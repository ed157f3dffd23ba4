//! Model of a symmetric two-path interferometer whose which-way detector
//! trades fringe visibility against path knowledge.
//!
//! The crate builds the photon-detector joint state, measures visibility
//! and distinguishability, and quantifies the classical and quantum parts
//! of the path correlations carried by the detector.

pub mod correlations;
pub mod error;
pub mod interferometer;
pub mod qlinalg;
pub mod verification;

pub use error::{Error, Result};
