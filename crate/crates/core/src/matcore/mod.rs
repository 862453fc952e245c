// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra: Hermitian/unitary types, spectral
//! decompositions, exponentials of anti-Hermitian matrices, factorizations
//! and random instance generation.

mod eigen;
mod expm;
mod factor;
mod matrix;
mod sample;

pub use eigen::{canonical_phase, eig_unitary, eigh, leading_multiplicity, Spectrum, UnitaryEigen};
pub use expm::expm_skew;
pub use factor::{inverse, qr, Qr};
pub use matrix::{pauli, ComplexMatrix, Hermitian, Unitary};
pub use sample::{
    gue_hermitian, gue_hermitian_with, haar_unitary, haar_unitary_with, rng_from_seed, sample,
    spectrum_uniform, spectrum_uniform_with, SampleKind, Sampled,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatError {
    #[error("matrix is not Hermitian: ‖M − M†‖_F = {residual:e}")]
    NotHermitian { residual: f64 },
    #[error("matrix is not unitary: ‖M†M − I‖_F = {residual:e}")]
    NotUnitary { residual: f64 },
    #[error("matrix is not anti-Hermitian: ‖Ω + Ω†‖_F = {residual:e}")]
    NotAntiHermitian { residual: f64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("entry count {len} is not a perfect square")]
    NotSquare { len: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension must be at least 1")]
    EmptyDimension,
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("invalid sampling interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
}
