// SPDX-License-Identifier: Apache-2.0

//! Objectives and right-hand sides of the gradient flows.

use super::problem::{GateProblem, ObservableProblem, SimplexPoint};
use crate::matcore::{ComplexMatrix, Hermitian, Unitary};
use crate::scalar::Real;

/// `Φ₁(x) = Σ λ_i x_i`.
pub fn phi1<T: Real>(x: &SimplexPoint<T>, eigenvalues: &[T]) -> T {
    x.as_slice()
        .iter()
        .zip(eigenvalues)
        .map(|(&a, &b)| a * b)
        .sum()
}

/// `Φ₁(U) = Tr(U ρ₀ U† Θ)`, evaluated through the populations.
pub fn phi1_unitary<T: Real>(u: &Unitary<T>, problem: &ObservableProblem<T>) -> T {
    phi1(&problem.populations(u), problem.eigenvalues())
}

/// `Φ₂(U) = Re Tr(A W† U)`.
pub fn phi2<T: Real>(u: &Unitary<T>, problem: &GateProblem<T>) -> T {
    let wu = problem.target().adjoint().matrix() * u.matrix();
    ComplexMatrix::trace_of_product(problem.weight(), &wu).re
}

/// `Φ₂` evaluated at `U = W U'`, i.e. `Re Tr(A U')`.
pub fn phi2_rotated<T: Real>(u_prime: &Unitary<T>, problem: &GateProblem<T>) -> T {
    ComplexMatrix::trace_of_product(problem.weight(), u_prime).re
}

/// Replicator field `ẋ_i = 2 x_i (λ_i − Σ_j λ_j x_j)`.
pub fn rhs_replicator<T: Real>(x: &[T], eigenvalues: &[T]) -> Vec<T> {
    let mean: T = x.iter().zip(eigenvalues).map(|(&a, &b)| a * b).sum();
    let two = T::lit(2.0);
    x.iter()
        .zip(eigenvalues)
        .map(|(&xi, &li)| two * xi * (li - mean))
        .collect()
}

/// Right-trivialized generator `ξ = −[ρ₀, U†ΘU]`, so that `U̇ = U ξ`.
pub fn generator_observable<T: Real>(
    u: &Unitary<T>,
    rho0: &Hermitian<T>,
    theta: &Hermitian<T>,
) -> ComplexMatrix<T> {
    let theta_t = &(u.adjoint().matrix() * theta.matrix()) * u.matrix();
    -&ComplexMatrix::commutator(rho0, &theta_t)
}

/// `U̇ = −U [ρ₀, U†ΘU]`.
pub fn rhs_observable_unitary<T: Real>(
    u: &Unitary<T>,
    rho0: &Hermitian<T>,
    theta: &Hermitian<T>,
) -> ComplexMatrix<T> {
    u.matrix() * &generator_observable(u, rho0, theta)
}

/// Generator in the rotated frame `U' = W†U`: `ξ = U'†A − A U'`.
pub fn generator_gate<T: Real>(u_prime: &Unitary<T>, a: &Hermitian<T>) -> ComplexMatrix<T> {
    &(u_prime.adjoint().matrix() * a.matrix()) - &(a.matrix() * u_prime.matrix())
}

/// Gate field in the rotated frame, `U̇' = A − U'AU'`.
pub fn rhs_gate<T: Real>(u_prime: &Unitary<T>, a: &Hermitian<T>) -> ComplexMatrix<T> {
    a.matrix() - &(&(u_prime.matrix() * a.matrix()) * u_prime.matrix())
}

/// Double-bracket field `ρ̇ = [ρ, [ρ, Θ]]`.
pub fn double_bracket_rhs<T: Real>(rho: &Hermitian<T>, theta: &Hermitian<T>) -> Hermitian<T> {
    Hermitian::from_hermitian_part(&ComplexMatrix::commutator(
        rho,
        &ComplexMatrix::commutator(rho, theta),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{expm_skew, gue_hermitian, haar_unitary, Spectrum};

    fn problem() -> ObservableProblem<f64> {
        let frame = haar_unitary(4, 9).unwrap();
        let s = Spectrum::new(vec![1.0, 0.2, -0.4, 0.7], frame).unwrap();
        ObservableProblem::new(s, SimplexPoint::new(vec![0.1, 0.3, 0.4, 0.2]).unwrap()).unwrap()
    }

    /// Directional derivative of `Φ` along `U ↦ U e^{hη}` against `Re Tr(η† ξ)`.
    fn fd_along(
        phi: impl Fn(&Unitary<f64>) -> f64,
        u: &Unitary<f64>,
        eta: &ComplexMatrix<f64>,
    ) -> f64 {
        let h = 1e-6;
        let plus = u.compose(&expm_skew(&eta.scale_real(h)).unwrap());
        let minus = u.compose(&expm_skew(&eta.scale_real(-h)).unwrap());
        (phi(&plus) - phi(&minus)) / (2.0 * h)
    }

    // ⟨η, ξ⟩ with the generator equal to the gradient: dΦ(η) = Re Tr(η† ξ)
    // for the observable flow, and a half of that for the gate flow.

    #[test]
    fn observable_generator_is_the_gradient() {
        let p = problem();
        let u = haar_unitary(4, 3).unwrap();
        let eta = gue_hermitian::<f64>(4, 4)
            .unwrap()
            .scale(crate::scalar::c(0.0, 1.0));
        let xi = generator_observable(&u, &p.rho0(), &p.theta());
        let expect = ComplexMatrix::inner(&eta, &xi).re;
        let got = fd_along(|v| phi1_unitary(v, &p), &u, &eta);
        assert!((got - expect).abs() < 1e-8, "{got} vs {expect}");
    }

    #[test]
    fn gate_generator_is_twice_the_gradient() {
        let w = haar_unitary(3, 5).unwrap();
        let a = Hermitian::from_real_diag(&[1.0, 0.5, 2.0]);
        let g = GateProblem::new(w.clone(), Unitary::identity(3), a.clone()).unwrap();
        let u = haar_unitary(3, 6).unwrap();
        let eta = gue_hermitian::<f64>(3, 7)
            .unwrap()
            .scale(crate::scalar::c(0.0, 1.0));
        let u_prime = Unitary::new_unchecked(w.adjoint().matrix() * u.matrix());
        let xi = generator_gate(&u_prime, &a);
        let expect = 0.5 * ComplexMatrix::inner(&eta, &xi).re;
        let got = fd_along(|v| phi2(v, &g), &u, &eta);
        assert!((got - expect).abs() < 1e-8, "{got} vs {expect}");
        let direct = rhs_gate(&u_prime, &a);
        let via_frame = u_prime.matrix() * &xi;
        assert!((&direct - &via_frame).frobenius_norm() < 1e-13);
    }

    #[test]
    fn replicator_is_tangent_to_simplex() {
        let p = problem();
        let v = rhs_replicator(p.x0().as_slice(), p.eigenvalues());
        assert!(v.iter().sum::<f64>().abs() < 1e-15);
        assert!(
            (phi1(p.x0(), p.eigenvalues()) - phi1_unitary(&Unitary::identity(4), &p)).abs() < 1e-14
        );
    }

    #[test]
    fn double_bracket_ascends() {
        let rho = gue_hermitian::<f64>(3, 1).unwrap();
        let theta = gue_hermitian::<f64>(3, 2).unwrap();
        let d = double_bracket_rhs(&rho, &theta);
        let rate = ComplexMatrix::trace_of_product(&d, &theta).re;
        assert!(d.trace().norm() < 1e-12);
        let bracket = ComplexMatrix::commutator(&rho, &theta).frobenius_norm();
        assert!((rate - bracket * bracket).abs() < 1e-10);
    }
}
