//! Informationally complete measurements built from operator frames.
//!
//! The crate identifies operators with vectors on a doubled space, builds
//! frames of operators and their duals, specializes to frames generated by
//! projective group representations, and simulates expectation estimation
//! from measurement statistics.

pub mod error;
pub mod estimate;
pub mod frame;
pub mod group;
pub mod io;
pub mod matrix;
pub mod random;

pub use error::{Error, Result};
pub use estimate::{ConvergenceTable, EstimationReport, MeasurementRecord};
pub use frame::{FrameOperator, OperatorFrame, Povm};
pub use group::{FiducialState, GroupRepSpec};
pub use io::{FrameJson, GroupMetaJson, MatrixJson, RepSpecJson, ReportJson};
pub use matrix::{C64, DoubledVector, OperatorMatrix};
