//! Exact coefficient arithmetic for the invariant-geometry engine.

pub mod gauss;
pub mod linalg;
pub mod scalar;

pub use gauss::GaussRat;
pub use linalg::{LinalgError, Matrix};
pub use scalar::{Mono, Scalar};
