//! Conjugate gradient solver for symmetric positive-definite linear systems.
//!
//! The crate is organized as:
//!
//! - [`linalg`]: vectors, dense/CSR matrices, deterministic problem
//!   generators, and a pivoted-elimination direct solver used as the
//!   reference route in tests and diagnostics.
//! - [`solver`]: the conjugate gradient iteration, a steepest-descent
//!   baseline, and solve reports with full scalar histories.
//! - [`diagnostics`]: measurable checks for the identities the iteration
//!   relies on (residual orthogonality, direction conjugacy, and the
//!   equivalent step-size/direction-coefficient formulas), evaluated over
//!   captured iteration traces.
//! - [`mmio`]: Matrix Market and plain-text vector files, plus the JSON
//!   run report.
//!
//! All floating-point reductions are sequential with a fixed order, so
//! identical inputs produce identical outputs run over run.

pub mod diagnostics;
pub mod error;
pub mod linalg;
pub mod mmio;
pub mod solver;

pub use error::{Error, Result};
