// SPDX-License-Identifier: Apache-2.0

//! Kinematic gradient flows of quantum control landscapes.
//!
//! The crate integrates the observable-maximization and gate-fidelity flows
//! on the unitary group (and their population/simplex reduction), evaluates
//! their closed-form solutions, measures convergence times under an
//! attracting-region halting rule and compares them with closed-form upper
//! bounds. A Hamiltonian-dependent layer (`dyncontrol`) connects field-space
//! gradients to the kinematic picture.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`, which is what the tolerances in the
//! test suites are stated for.

// `!(x > 0)` guards are meant to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complexity;
pub mod dyncontrol;
pub mod flows;
pub mod matcore;
mod scalar;

pub use scalar::{Real, C};

pub type ComplexMatrix64 = matcore::ComplexMatrix<f64>;
pub type Hermitian64 = matcore::Hermitian<f64>;
pub type Unitary64 = matcore::Unitary<f64>;
pub type Spectrum64 = matcore::Spectrum<f64>;
pub type SimplexPoint64 = flows::SimplexPoint<f64>;
pub type ObservableProblem64 = flows::ObservableProblem<f64>;
pub type GateProblem64 = flows::GateProblem<f64>;
pub type ControlSystem64 = dyncontrol::ControlSystem<f64>;

pub type ComplexMatrix32 = matcore::ComplexMatrix<f32>;
pub type Unitary32 = matcore::Unitary<f32>;
