//! Solver for linear time-varying initial value problems
//! `ẋ = A(t)x + b(t)`, `x(t0) = x0`, built on the Peano-Baker series.
//!
//! * [`matrep`]: exact polynomial and polynomial-matrix arithmetic.
//! * [`pbs`]: the series engine with a priori truncation bounds.
//! * [`commuting`]: commuting families and `exp(∫A)`.
//! * [`cauchy`]: inhomogeneous problems by two independent routes.
//! * [`verify`]: invariant checks, closed-form cases and a reference integrator.
//! * [`cli`]: problem files and the command-line front end.

pub mod cauchy;
pub mod cli;
pub mod commuting;
pub mod error;
pub mod matrep;
pub mod pbs;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
