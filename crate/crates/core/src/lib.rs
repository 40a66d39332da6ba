//! Orthogonal modular forms for positive definite even lattices.
//!
//! Class sets are enumerated with Kneser neighbours, Hecke operators are
//! computed as neighbour-count matrices, and eigenforms are studied through
//! Siegel theta series and closed-form eigenvalue formulas.

#![allow(clippy::needless_range_loop)]

pub mod congruence;
pub mod error;
pub mod exactalg;
pub mod genus;
pub mod hecke;
pub mod isom;
pub mod lattice;
pub mod lfun;
pub mod moddata;
pub mod neighbour;
pub mod textual;
pub mod theta;

pub use error::{Error, Result};

/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;
/// Arbitrary-precision rational, always in lowest terms.
pub type Rational = num_rational::BigRational;
/// Dense matrix of rationals.
pub type RationalMatrix = exactalg::Matrix<Rational>;
