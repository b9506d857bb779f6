//! Planar straight-line drawings of restricted planar graph families with
//! provably bounded edge-length ratio, the matching lower-bound instance
//! generators, and verifiers for every drawing and decomposition invariant
//! the constructions rely on.

pub mod draw;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod io;
pub mod metrics;
pub mod model;

pub use error::{Error, Result};
