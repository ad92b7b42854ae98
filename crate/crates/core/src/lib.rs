//! Orthonormal polynomials from Jacobi recurrence coefficients.
//!
//! The crate takes a coefficient sequence `(a_n, b_n)` as its description
//! of an orthogonality measure and provides:
//!
//! - [`coeffs`]: built-in coefficient families, the dyadic diagonal
//!   sequence, the second-kind ("stripped") transform, and support models;
//! - [`polyeval`]: overflow-safe evaluation of the orthonormal polynomials,
//!   leading coefficients, and the Christoffel-Darboux kernel;
//! - [`tridiag`]: Jacobi truncations, a Sturm-sequence bisection
//!   eigensolver, interval zero counts, and Gauss quadrature;
//! - [`theorems`]: zero-free interval certificates around points off the
//!   support and around isolated points, kernel inequality checks,
//!   interlacing, and Stieltjes-transform consistency;
//! - [`gapdense`]: the construction of a measure whose polynomial zeros
//!   are dense in a spectral gap, with its residual and spectrum checks.
//!
//! The `jacobi-zeros` binary exposes all of it with CSV/JSON output.

// negated float comparisons are deliberate: `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coeffs;
pub mod gapdense;
pub mod polyeval;
pub mod theorems;
pub mod tridiag;

pub use coeffs::{beta, CoefficientSequence, SupportModel};
pub use polyeval::{eval_p, eval_q, kernel_cd, kernel_direct, leading_coeff_log, ScaledPolyValue};
pub use theorems::{certify_theorem1, certify_theorem2, certify_theorem2_range, delta_radius};
pub use tridiag::{count_zeros_in, gauss_quadrature, truncate, TridiagonalMatrix, ZeroSet};
