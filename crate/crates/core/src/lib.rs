//! Worst-case complexity toolkit for linear tensor-product problems on
//! reproducing kernel Hilbert spaces.
//!
//! The crate covers four layers:
//!
//! * [`spectra`]: kernels, eigenvalue sequences and eigenfunctions;
//! * [`roots`] and [`nystrom`]: analytic univariate spectra and an independent
//!   quadrature oracle that validates them;
//! * [`complexity`]: information complexity for arbitrary linear information,
//!   decay and QPT exponents, and the tractability decision table;
//! * [`reduction`]: exact finite-dimensional models on which minimal errors for
//!   function values can be computed, used to check the operator-to-functional
//!   lower bound.
//!
//! [`reports`] turns all of it into CSV, JSON and SVG artifacts and hosts the
//! reproduction suite.

// Negated float comparisons below are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complexity;
pub mod error;
pub mod nystrom;
pub mod quadrature;
pub mod reduction;
pub mod reports;
pub mod roots;
pub mod special;
pub mod spectra;

pub use error::{Error, Result};

/// Relative tolerance under which two eigenvalues (or an eigenvalue and a
/// threshold) are treated as equal.
pub const REL_TIE: f64 = 1e-12;

/// Default absolute tolerance for quadrature-based checks.
pub const QUAD_TOL: f64 = 1e-8;
