// SPDX-License-Identifier: Apache-2.0

//! Instance generators shared by the integration tests.

#![allow(dead_code)]

use kinflow::dyncontrol::{objective_value, ControlField, ControlSystem, Objective};
use kinflow::flows::SimplexPoint;
use kinflow::matcore::{
    gue_hermitian_with, haar_unitary_with, ComplexMatrix, Hermitian, Spectrum, Unitary,
};
use kinflow::C;
use rand::Rng;

/// Uniform values on `[-1, 1]`, redrawn until `λ₁ − λ₂ ≥ min_gap`.
pub fn nondegenerate_spectrum<R: Rng>(rng: &mut R, n: usize, min_gap: f64) -> Spectrum<f64> {
    loop {
        let values: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s = Spectrum::diagonal(values).unwrap();
        if n == 1 || s.values()[0] - s.values()[1] >= min_gap {
            return s;
        }
    }
}

/// `k` copies of `1` on top, the rest uniform on `[-1, 1 - gap]`.
pub fn degenerate_spectrum<R: Rng>(rng: &mut R, n: usize, k: usize, gap: f64) -> Spectrum<f64> {
    let mut values = vec![1.0; k];
    values.extend((k..n).map(|_| rng.random_range(-1.0..=1.0 - gap)));
    Spectrum::diagonal(values).unwrap()
}

/// Same spectrum rotated into a Haar-random eigenbasis.
pub fn rotated<R: Rng>(rng: &mut R, s: &Spectrum<f64>) -> Spectrum<f64> {
    Spectrum::new(
        s.values().to_vec(),
        haar_unitary_with(rng, s.dim()).unwrap(),
    )
    .unwrap()
}

/// Normalized i.i.d. uniform weights.
pub fn random_simplex<R: Rng>(rng: &mut R, n: usize) -> SimplexPoint<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    SimplexPoint::from_weights(&w).unwrap()
}

/// `V diag(w) V†` with Haar `V` and random weights: a full-rank mixed state.
pub fn random_density<R: Rng>(rng: &mut R, n: usize) -> Hermitian<f64> {
    let g = haar_unitary_with::<f64, _>(rng, n).unwrap();
    let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let d = ComplexMatrix::from_real_diag(&weights.iter().map(|w| w / total).collect::<Vec<_>>());
    Hermitian::from_hermitian_part(&(&(g.matrix() * &d) * &g.adjoint()))
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> Hermitian<f64> {
    gue_hermitian_with(rng, n).unwrap()
}

/// `V† diag(−1, e^{−iθ₂}, …) V` with Haar `V`: one eigenphase exactly at `π`.
pub fn antipodal_target<R: Rng>(rng: &mut R, n: usize) -> Unitary<f64> {
    let v = haar_unitary_with::<f64, _>(rng, n).unwrap();
    let mut phases = vec![C::new(-1.0, 0.0)];
    phases.extend((1..n).map(|_| C::from_polar(1.0, -rng.random_range(-3.0..3.0))));
    let d = ComplexMatrix::from_diag(&phases);
    Unitary::new(&(v.adjoint().matrix() * &d) * v.matrix()).unwrap()
}

/// Central difference of `Φ` in `ε_m`, divided by `Δt`.
pub fn fd_gradient(
    sys: &ControlSystem<f64>,
    field: &ControlField<f64>,
    obj: &Objective<f64>,
    h: f64,
) -> Vec<f64> {
    (0..field.len())
        .map(|m| {
            let mut e = vec![0.0; field.len()];
            e[m] = 1.0;
            let e = ControlField::new(e).unwrap();
            let plus = objective_value(sys, &field.add_scaled(h, &e), obj).unwrap();
            let minus = objective_value(sys, &field.add_scaled(-h, &e), obj).unwrap();
            (plus - minus) / (2.0 * h) / sys.dt()
        })
        .collect()
}

/// `‖a − b‖_∞ / ‖a‖_∞`.
pub fn rel_inf(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = a
        .iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    diff / scale
}
