//! Numerical verification engine for sub-static triples `(M, g, u)`.
//!
//! The crate is generic over the scalar type (`f32` or `f64`); the aliases at
//! the bottom of this file fix `f64`, which every check in the report layer
//! uses.

pub mod boundary;
pub mod catalog;
pub mod comparison;
pub mod error;
pub mod kernel;
pub mod report;
pub mod linalg;
pub mod scalar;
pub mod tolerance;
pub mod triple;
pub mod verdict;
pub mod identities;
pub mod wavemap;

pub use error::{Error, Result};
pub use scalar::Real;
pub use tolerance::Tolerances;
pub use verdict::Verdict;

pub type Chart64 = kernel::Chart<f64>;
pub type Surface64 = kernel::Surface<f64>;
pub type Mat64 = linalg::Mat<f64>;
pub type Triple64 = triple::SubstaticTriple<f64>;
