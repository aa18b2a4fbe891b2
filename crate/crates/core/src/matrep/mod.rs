//! Polynomial and polynomial-matrix arithmetic.
//!
//! Everything the series engine integrates is represented exactly in the
//! monomial basis about a per-object origin. General continuous families are
//! brought into that form by Chebyshev interpolation, and sup-norms on an
//! interval are bounded rigorously from coefficient magnitudes.

mod dense;
mod function;
mod interp;
mod matrix;
mod poly;

pub use dense::ConstMatrix;
pub use function::{Interval, MatrixFunction, SampledMatrix, SampledVector, VectorFunction};
pub use interp::{interpolate, interpolate_vector, DEFAULT_INTERP_DEGREE};
pub use matrix::{bound_sup_norm, PolyMatrix, PolyVector};
pub use poly::{Poly, FLUSH_THRESHOLD};

/// Default cap on polynomial degree inside the series recursion.
pub const DEFAULT_DEGREE_CAP: usize = 64;
