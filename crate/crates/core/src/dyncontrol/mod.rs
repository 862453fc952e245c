// SPDX-License-Identifier: Apache-2.0

//! Hamiltonian layer: piecewise-constant fields in the dipole coupling
//! `H = H₀ − ε(t)μ`, field gradients of the kinematic objectives, the `G`
//! matrix and gradient ascent.

mod ascent;
mod chain;
mod gmatrix;
mod gradient;
mod system;

pub use ascent::{gradient_ascent, AscentHistory, AscentOptions, AscentTermination, Iterate};
pub use chain::{check_chain_rule, ChainRuleCheck};
pub use gmatrix::{g_matrix, GMatrix, G_MATRIX_MAX_DIM};
pub use gradient::{grad_phi1, grad_phi2, objective_value, Objective};
pub use system::{
    heisenberg_dipole, integrated_dipoles, propagate, ControlField, ControlSystem, Propagation,
};

use thiserror::Error;

use crate::matcore::MatError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("need at least 2 time intervals, got {intervals}")]
    TooFewIntervals { intervals: usize },
    #[error("horizon must be positive and finite, got {horizon}")]
    InvalidHorizon { horizon: f64 },
    #[error("field values must be finite")]
    NonFiniteField,
    #[error("gradient has an imaginary part {imag}")]
    ComplexGradient { imag: f64 },
    #[error("G matrix needs N⁴ storage; N = {dim} exceeds the limit {limit}")]
    GMatrixTooLarge { dim: usize, limit: usize },
    #[error("step {step} out of range")]
    InvalidStep { step: f64 },
    #[error(transparent)]
    Matrix(#[from] MatError),
}
