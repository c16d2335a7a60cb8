use thiserror::Error;

use crate::polygon::LatticePoint;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("convex hull has dimension {0}, expected a two-dimensional polygon")]
    Dimension(i32),
    #[error("{0} is not a vertex of the polygon")]
    NotAVertex(LatticePoint),
    #[error("{0} is not a lattice point of the polygon")]
    NotInPolygon(LatticePoint),
    #[error("inner set is empty")]
    EmptyInner,
    #[error("polygon has no interior lattice points")]
    EmptyInterior,
    #[error("polygon has interior lattice points")]
    NonEmptyInterior,
    #[error("index {index} outside {lo}..={hi}")]
    Range { index: i64, lo: i64, hi: i64 },
    #[error("polygon is equivalent to {0}, whose linear strand vanishes entirely")]
    Pathological(&'static str),
    #[error("removal plan rejected: {0}")]
    InvalidPlan(String),
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("resource limit exceeded: {0}")]
    ResourceExceeded(String),
    #[error("polygon has {0} lattice points, the reference computation is capped at 8")]
    TooLarge(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
