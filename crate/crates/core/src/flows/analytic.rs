// SPDX-License-Identifier: Apache-2.0

//! Closed-form solutions of the replicator and gate flows.

use num_traits::One;

use super::problem::{GateProblem, ObservableProblem, SimplexPoint};
use super::FlowError;
use crate::matcore::{inverse, ComplexMatrix, Unitary};
use crate::scalar::{cr, Real, C};

/// `ln x_i(s)` with `x_i(s) ∝ x_i(0) e^{2sλ_i}`; zero entries map to `−∞`.
///
/// Exponents are taken relative to the top eigenvalue and the largest term so
/// no intermediate overflows, and a uniform shift of the spectrum cancels.
pub fn analytic_log_x<T: Real>(s: T, problem: &ObservableProblem<T>) -> Vec<T> {
    let lambda = problem.eigenvalues();
    let top = lambda[0];
    let two = T::lit(2.0);
    let e: Vec<T> = problem
        .x0()
        .as_slice()
        .iter()
        .zip(lambda)
        .map(|(&x, &l)| {
            if x > T::zero() {
                x.ln() + two * s * (l - top)
            } else {
                T::neg_infinity()
            }
        })
        .collect();
    let m = e.iter().copied().fold(T::neg_infinity(), T::max);
    let log_z = m + e.iter().map(|&v| (v - m).exp()).sum::<T>().ln();
    e.iter().map(|&v| v - log_z).collect()
}

/// Replicator solution `x_i(s) = x_i(0) e^{2sλ_i} / Σ_j x_j(0) e^{2sλ_j}`.
pub fn analytic_x<T: Real>(s: T, problem: &ObservableProblem<T>) -> SimplexPoint<T> {
    SimplexPoint::clamped(analytic_log_x(s, problem).into_iter().map(T::exp).collect())
}

/// `1 − tanh s = 2/(e^{2s} + 1)`, accurate for large `s`.
fn one_minus_tanh<T: Real>(s: T) -> T {
    let two = T::lit(2.0);
    two / ((two * s).exp() + T::one())
}

fn require_identity_weight<T: Real>(problem: &GateProblem<T>) -> Result<(), FlowError> {
    if problem.has_identity_weight() {
        Ok(())
    } else {
        Err(FlowError::UnsupportedWeight)
    }
}

/// Per-mode Möbius solution in the rotated frame: each eigenvalue `z` of `U'(0)`
/// moves as `(tanh s + z)/(1 + z tanh s)`. A mode exactly at `z = −1` is fixed.
pub fn analytic_gate_rotated<T: Real>(
    s: T,
    problem: &GateProblem<T>,
) -> Result<Unitary<T>, FlowError> {
    require_identity_weight(problem)?;
    let m = cr(one_minus_tanh(s));
    let diag: Vec<C<T>> = problem
        .initial_phases()
        .iter()
        .map(|&theta| {
            if theta == T::PI() {
                return -C::<T>::one();
            }
            let z = C::from_polar(T::one(), theta);
            let p = C::<T>::one() + z;
            let w: C<T> = (p - m) / (p - z * m);
            w / w.norm()
        })
        .collect();
    // U0†W = V† diag(e^{−iθ'}) V, hence U'(0) = V† diag(e^{iθ'}) V
    let v = problem.initial_frame().matrix();
    let d = ComplexMatrix::from_diag(&diag);
    Ok(Unitary::new_unchecked(&(&v.adjoint() * &d) * v))
}

/// Resolvent form of the gate solution in the rotated frame,
/// `U'(s) = (P − mI)(P − mU'(0))⁻¹` with `P = I + U'(0)` and `m = 1 − tanh s`,
/// which equals `(sinh s + cosh s U'(0))(cosh s + sinh s U'(0))⁻¹`.
/// Fails once the denominator's condition number passes `1e12`, which happens
/// at large `s` when a mode of `U'(0)` sits at `−1`.
pub fn analytic_gate_resolvent<T: Real>(
    s: T,
    problem: &GateProblem<T>,
) -> Result<Unitary<T>, FlowError> {
    require_identity_weight(problem)?;
    let n = problem.dim();
    let start = problem.rotated_start();
    let id = ComplexMatrix::identity(n);
    let m = one_minus_tanh(s);
    let p = &id + start.matrix();
    let num = &p - &id.scale_real(m);
    let den = &p - &start.scale_real(m);
    let inv = inverse(&den).map_err(|_| FlowError::SingularResolvent {
        s: s.to_f64_lossy(),
    })?;
    let cond = den.frobenius_norm() * inv.frobenius_norm();
    if !(cond <= T::lit(1e12)) {
        return Err(FlowError::SingularResolvent {
            s: s.to_f64_lossy(),
        });
    }
    Ok(Unitary::new_unchecked(&num * &inv))
}

/// Gate solution in the original frame, `U(s) = W U'(s)`.
pub fn analytic_gate<T: Real>(s: T, problem: &GateProblem<T>) -> Result<Unitary<T>, FlowError> {
    Ok(problem.unrotate(&analytic_gate_rotated(s, problem)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{haar_unitary, Spectrum};

    #[test]
    fn replicator_closed_form_small_case() {
        let s = Spectrum::diagonal(vec![1.0f64, 0.0]).unwrap();
        let p = ObservableProblem::uniform(s);
        let x = analytic_x(0.5, &p);
        // x1 = e / (e + 1)
        let e = std::f64::consts::E;
        assert!((x[0] - e / (e + 1.0)).abs() < 1e-15);
        assert!((x[0] + x[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn large_s_does_not_overflow() {
        let s = Spectrum::diagonal(vec![50.0f64, -50.0, 0.0]).unwrap();
        let p = ObservableProblem::uniform(s);
        let x = analytic_x(1e6, &p);
        assert_eq!(x[0], 1.0);
        assert_eq!(x[1], 0.0);
        let lx = analytic_log_x(1e3, &p);
        assert!((lx[1] - (-1e5)).abs() < 1e-8);
        assert!((lx[2] - (-2e5)).abs() < 1e-8);
    }

    #[test]
    fn resolvent_and_modes_agree() {
        let w = haar_unitary::<f64>(5, 21).unwrap();
        let g = GateProblem::from_target(w).unwrap();
        for &s in &[0.0, 0.3, 2.0, 8.0] {
            let a = analytic_gate_resolvent(s, &g).unwrap();
            let b = analytic_gate_rotated(s, &g).unwrap();
            assert!(
                (a.matrix() - b.matrix()).frobenius_norm() < 1e-11,
                "s = {s}"
            );
        }
        let u0 = analytic_gate(0.0, &g).unwrap();
        assert!((u0.matrix() - &ComplexMatrix::identity(5)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn antipodal_mode_is_fixed() {
        let w = Unitary::from_phases(&[C::new(-1.0f64, 0.0), C::new(0.0, 1.0)]).unwrap();
        let g = GateProblem::from_target(w).unwrap();
        let u = analytic_gate_resolvent(10.0, &g).unwrap();
        assert!((u[(0, 0)] + C::one()).norm() < 1e-15);
        assert!((u[(1, 1)] - C::one()).norm() < 1e-8);
        assert!(matches!(
            analytic_gate_resolvent(25.0, &g),
            Err(FlowError::SingularResolvent { .. })
        ));
        let v = analytic_gate_rotated(40.0, &g).unwrap();
        assert_eq!(v[(0, 0)], C::new(-1.0, 0.0));
        assert!((v[(1, 1)] - C::one()).norm() < 1e-15);
    }

    #[test]
    fn weighted_problem_has_no_closed_form() {
        let w = haar_unitary::<f64>(2, 1).unwrap();
        let a = crate::matcore::Hermitian::from_real_diag(&[1.0, 2.0]);
        let g = GateProblem::new(w, Unitary::identity(2), a).unwrap();
        assert_eq!(
            analytic_gate(1.0, &g).unwrap_err(),
            FlowError::UnsupportedWeight
        );
    }
}
