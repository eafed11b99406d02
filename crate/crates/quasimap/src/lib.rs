//! Exact computation of quasimap generating series.
//!
//! Everything here is exact: big rationals, cyclotomic fields, and truncated
//! Laurent series in an equivariant regulator. Nothing is floating point.

pub mod algebra;
pub mod asymptotics;
pub mod birkhoff;
pub mod error;
pub mod genus_one;
pub mod geometry;
pub mod graph_sum;
pub mod report;

pub use error::{Error, Result};
