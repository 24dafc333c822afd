pub mod coaction;
pub mod constraints;
pub mod error;
pub mod estimation;
pub mod euclidean;
pub mod focal;
pub mod exterior;
pub mod invariants;
pub mod matrix;
pub mod polyforms;
pub mod scalar;

pub use error::{Error, Result};
pub use exterior::{minor, MultiIndex, Multivector};
pub use matrix::Matrix;
pub use scalar::{Mode, Rational, Scalar};
