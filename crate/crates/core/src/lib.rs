//! Numerical toolkit for discrete-time passive linear systems.
//!
//! The same structure shows up in three settings, and each has a module:
//!
//! * [`stein`]: matrices `A` with `H - A* H A / alpha^2` positive
//!   (semi)definite, closed under products with multiplied scales;
//! * [`db`]: rational matrix functions bounded by one outside the unit disk;
//! * [`realization`]: state-space arrays `[[A, B], [C, D]]` with KYP
//!   certificates `diag(P, I) - R* diag(P, I) R >= 0`.
//!
//! [`mconvex`] provides the matrix-convex combinations `sum v_j* A_j v_j`
//! shared by all three, [`inclusion`] applies the Stein sets to switched
//! difference inclusions, and [`linalg`] is the dense complex kernel.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod db;
pub mod error;
pub mod inclusion;
pub mod linalg;
pub mod mconvex;
pub mod realization;
pub mod stein;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianMatrix, Verdict};
pub use realization::RealizationArray;

pub use num_complex::Complex64;
