//! Graded Betti tables of toric surfaces attached to lattice polygons,
//! computed from bigraded Koszul cohomology over prime fields.

pub mod error;
pub mod polygon;

pub use error::{Error, Result};
pub mod linalg;
pub mod koszul;
pub mod closed_forms;
pub mod engine;
pub mod oracle;
pub mod format;
pub mod cli;
