// SPDX-License-Identifier: Apache-2.0

//! Halting criterion, convergence-time and path-length bounds, and
//! dimension-scaling studies.

mod bounds;
mod distance;
mod fit;
mod measure;
mod path;
mod study;

pub use bounds::{
    bound_path_length, bound_tc_eps_observable, bound_tc_gate, bound_tc_region_observable,
    observable_bounds, BoundSet, GateBoundReport, HaltSpec,
};
pub use distance::{
    distance_gate, distance_observable, in_attracting_region_observable, AttractingRegion,
};
pub use fit::{least_squares, LinearFit};
pub use measure::{measure_tc, ConvergenceReport, Halting, HALT_RESOLUTION};
pub use path::{
    gate_speed_closed_form, path_length, path_length_until, trapezoid_until, MIN_SAMPLES_PER_UNIT,
};
pub use study::{
    draw_gate_problem, fit_records, fixed_gap_spectrum, instance_seed, measure_gate_instance,
    run_instance, run_scaling_study, InstanceRecord, ScalingStudy, StudyConfig, StudyKind,
};

use thiserror::Error;

use crate::flows::FlowError;
use crate::matcore::MatError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexityError {
    #[error("precision must be positive and finite, got {epsilon_p}")]
    InvalidPrecision { epsilon_p: f64 },
    #[error("dimension must be at least one")]
    EmptyDimension,
    #[error("trajectory too sparse: need {required_per_unit} samples per unit s, found spacing {spacing}")]
    SparseSampling {
        required_per_unit: f64,
        spacing: f64,
    },
    #[error("invalid study: {0}")]
    InvalidStudy(String),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Matrix(#[from] MatError),
}
