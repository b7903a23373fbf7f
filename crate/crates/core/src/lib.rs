//! Galerkin finite element solver for the one-dimensional nonlinear
//! Schrödinger equation
//!
//! ```text
//! u_t = i u_xx + i f(|u|²) u + g(t, x),   x ∈ (a, b),  u(t, a) = u(t, b) = 0,
//! ```
//!
//! discretized in time by a two-level linearly implicit Crank–Nicolson
//! scheme: each step first solves a linear predictor for the half-step value
//! with the nonlinearity frozen at the previous iterate, then a linear
//! corrector with the nonlinearity evaluated at the predictor.
//!
//! The crate also ships the verification machinery used to check the
//! scheme: manufactured solutions, error norms, empirical orders of
//! convergence and consistency residuals.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod assembly;
pub mod cli;
pub mod error;
pub mod fe;
pub mod field;
pub mod linalg;
pub mod nonlinearity;
pub mod projection;
pub mod timestep;
pub mod verification;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use fe::{build_perturbed_mesh, build_uniform_mesh, eval_basis, gauss_rule};
pub use fe::{FeSpace, FieldVector, Mesh1D, QuadRule};
pub use field::{Partial, ScalarField};
pub use linalg::{BandedLu, BandedMatrix};
pub use nonlinearity::Nonlinearity;
pub use timestep::{advance, NlsProblem, RunOutput, StepRecord, Stepper, TimeGrid};
