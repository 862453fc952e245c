// SPDX-License-Identifier: Apache-2.0

//! Seeded random instances: Haar unitaries, GUE Hermitian matrices and
//! uniform spectra.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::eigen::Spectrum;
use super::factor::qr;
use super::matrix::{ComplexMatrix, Hermitian, Unitary};
use super::MatError;
use crate::scalar::{c, Real, C};

/// Generator used for every seeded draw in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SampleKind {
    HaarUnitary,
    GueHermitian,
    SpectrumUniform { a: f64, b: f64 },
}

#[derive(Clone, Debug)]
pub enum Sampled<T> {
    Unitary(Unitary<T>),
    Hermitian(Hermitian<T>),
    Spectrum(Spectrum<T>),
}

pub fn sample<T: Real>(kind: SampleKind, n: usize, seed: u64) -> Result<Sampled<T>, MatError> {
    Ok(match kind {
        SampleKind::HaarUnitary => Sampled::Unitary(haar_unitary(n, seed)?),
        SampleKind::GueHermitian => Sampled::Hermitian(gue_hermitian(n, seed)?),
        SampleKind::SpectrumUniform { a, b } => Sampled::Spectrum(spectrum_uniform(n, a, b, seed)?),
    })
}

fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    c(T::lit(re * s), T::lit(im * s))
}

fn ginibre<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng))
}

pub fn haar_unitary<T: Real>(n: usize, seed: u64) -> Result<Unitary<T>, MatError> {
    haar_unitary_with(&mut rng_from_seed(seed), n)
}

/// QR of a complex Ginibre matrix with `R`'s diagonal made positive.
pub fn haar_unitary_with<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
) -> Result<Unitary<T>, MatError> {
    if n == 0 {
        return Err(MatError::EmptyDimension);
    }
    loop {
        let g = ginibre::<T, R>(rng, n);
        // a singular Gaussian draw has probability zero; redraw if it happens
        if let Ok(f) = qr(&g) {
            return Unitary::new(f.q);
        }
    }
}

pub fn gue_hermitian<T: Real>(n: usize, seed: u64) -> Result<Hermitian<T>, MatError> {
    gue_hermitian_with(&mut rng_from_seed(seed), n)
}

pub fn gue_hermitian_with<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
) -> Result<Hermitian<T>, MatError> {
    if n == 0 {
        return Err(MatError::EmptyDimension);
    }
    let g = ginibre::<T, R>(rng, n);
    Ok(Hermitian::from_hermitian_part(&g))
}

pub fn spectrum_uniform<T: Real>(
    n: usize,
    a: f64,
    b: f64,
    seed: u64,
) -> Result<Spectrum<T>, MatError> {
    spectrum_uniform_with(&mut rng_from_seed(seed), n, a, b)
}

/// `n` i.i.d. uniform values on `[a, b]`, sorted descending, identity frame.
pub fn spectrum_uniform_with<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    a: f64,
    b: f64,
) -> Result<Spectrum<T>, MatError> {
    if n == 0 {
        return Err(MatError::EmptyDimension);
    }
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(MatError::InvalidInterval { a, b });
    }
    let values = (0..n)
        .map(|_| T::lit(a + (b - a) * rng.random::<f64>()))
        .collect();
    Spectrum::diagonal(values)
}
