// SPDX-License-Identifier: Apache-2.0

//! Gradient flows of the kinematic objectives on the simplex and on the
//! unitary group, with their closed-form solutions.

mod analytic;
mod integrate;
mod objective;
mod problem;

pub use analytic::{
    analytic_gate, analytic_gate_resolvent, analytic_gate_rotated, analytic_log_x, analytic_x,
};
pub use integrate::{
    integrate, integrate_until, rk4_replicator_step, rkmk4_step, FlowTrajectory, IntegratorOptions,
    KinematicFlow, Sample, StepStat, Termination, UnitaryObservableFlow,
};
pub use objective::{
    double_bracket_rhs, generator_gate, generator_observable, phi1, phi1_unitary, phi2,
    phi2_rotated, rhs_gate, rhs_observable_unitary, rhs_replicator,
};
pub use problem::{GateProblem, MixedStateProblem, ObservableProblem, SimplexPoint};

use thiserror::Error;

use crate::matcore::MatError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("populations must be nonnegative and sum to one (sum = {sum})")]
    NotOnSimplex { sum: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension must be at least one")]
    EmptyDimension,
    #[error("not a density matrix (trace {trace}, smallest eigenvalue {min_eigenvalue})")]
    NotDensityMatrix { trace: f64, min_eigenvalue: f64 },
    #[error("closed-form gate solution needs A = I")]
    UnsupportedWeight,
    #[error("resolvent is numerically singular at s = {s}")]
    SingularResolvent { s: f64 },
    #[error("integration horizon must be finite and nonnegative, got {s_max}")]
    InvalidHorizon { s_max: f64 },
    #[error("non-finite state")]
    NonFinite,
    #[error(transparent)]
    Matrix(#[from] MatError),
}
