// Index loops mirror the matrix formulas they implement.
#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod datum;
pub mod ehrhart;
pub mod error;
pub mod exact;
pub mod fan;
pub mod pipeline;
pub mod simplex;
pub mod triangulation;

pub use error::{Error, Result};
