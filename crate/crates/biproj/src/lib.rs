//! Solver for bihomogeneous polynomial systems whose projection to the first
//! projective factor is a finite set of points.
//!
//! The pipeline: probe or search for an admissible bidegree, build the
//! generalized multiplication maps on the quotient slice, change ordering by
//! matrix-FGLM to get a Groebner basis of the chart ideal, recover the
//! projected points numerically from the eigenstructure, and certify each
//! candidate by the specialization membership test.

pub mod admissible;
pub mod bipoly;
pub mod cli;
pub mod eigen;
pub mod field;
pub mod fglm;
pub mod gb;
pub mod macaulay;
pub mod matrix;
pub mod multmap;
pub mod numeric;
pub mod verify;

#[cfg(test)]
pub(crate) mod fixtures;

pub use bipoly::{BiDegree, BiPoly, BiSystem};
pub use field::{FieldSpec, Scalar};
pub use macaulay::SystemWorkspace;
