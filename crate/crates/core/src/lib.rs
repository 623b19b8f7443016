//! Structural graph-minor toolkit: walls, flatness, rural divisions, apex
//! reduction and a brute-force checker for the weak structure trichotomy,
//! with a machine-checkable certificate for every positive claim.
//!
//! Everything here is exact and exponential in the worst case; the intended
//! inputs are small ("desk scale") graphs.

pub mod decomposition;
pub mod generators;
pub mod graph;
pub mod json;
pub mod minors;
pub mod rural;
pub mod structure;
pub mod wall;

mod error;

pub use error::{Error, Result};
pub use graph::{Graph, VertexId, VertexSet};
