//! Imprecise (lower/upper) joint probabilities for non-commuting quantum
//! projectors: validated hermitean linear algebra, the two-projector
//! canonical decomposition, probability bounds and their axiom suite, the
//! classical imprecise-probability counterpart, successive-measurement
//! models, and the exactly reproducible spin-1 catalog.

pub use nalgebra;
pub use num_complex;

pub mod batch;
pub mod classical;
pub mod error;
pub mod geometry;
pub mod hermitian;
pub mod improb;
pub mod matrix;
pub mod measurement;
pub mod random;
pub mod spin;

pub use error::{Error, Result};
pub use hermitian::{DensityMatrix, HermitianOperator, Projector, Tolerances};
pub use matrix::ComplexMatrix;
