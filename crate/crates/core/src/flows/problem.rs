// SPDX-License-Identifier: Apache-2.0

//! Problem definitions for the kinematic flows.

use num_traits::Zero;

use super::FlowError;
use crate::matcore::{eig_unitary, eigh, ComplexMatrix, Hermitian, Spectrum, Unitary};
use crate::scalar::{Real, C};

/// A point on the probability simplex: populations in the observable's eigenbasis.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexPoint<T> {
    x: Vec<T>,
}

impl<T: Real> SimplexPoint<T> {
    /// Validates `Σx = 1` within `1e-12`; entries in `[−1e-14, 0)` are clamped to zero.
    pub fn new(x: Vec<T>) -> Result<Self, FlowError> {
        if x.is_empty() {
            return Err(FlowError::EmptyDimension);
        }
        let floor = -T::tol(1e-14);
        if x.iter().any(|v| !v.is_finite() || *v < floor) {
            return Err(FlowError::NotOnSimplex {
                sum: x.iter().copied().sum::<T>().to_f64_lossy(),
            });
        }
        let sum: T = x.iter().copied().sum();
        if (sum - T::one()).abs() > T::tol(1e-12) {
            return Err(FlowError::NotOnSimplex {
                sum: sum.to_f64_lossy(),
            });
        }
        Ok(Self::clamped(x))
    }

    /// Normalizes a nonnegative weight vector onto the simplex.
    pub fn from_weights(w: &[T]) -> Result<Self, FlowError> {
        let sum: T = w.iter().copied().sum();
        if w.is_empty() || !(sum > T::zero()) || w.iter().any(|v| *v < T::zero()) {
            return Err(FlowError::NotOnSimplex {
                sum: sum.to_f64_lossy(),
            });
        }
        Self::new(w.iter().map(|&v| v / sum).collect())
    }

    /// Clamps negative rounding to zero and rescales the sum back to one.
    /// Off the simplex the replicator sum obeys `Ṡ = 2Φ(1 − S)`, which is
    /// unstable when `Φ < 0`, so integrators project after every step.
    pub(crate) fn clamped(mut x: Vec<T>) -> Self {
        for v in x.iter_mut() {
            if *v < T::zero() {
                *v = T::zero();
            }
        }
        let sum: T = x.iter().copied().sum();
        if sum > T::zero() && sum != T::one() {
            for v in x.iter_mut() {
                *v = *v / sum;
            }
        }
        Self { x }
    }

    pub fn uniform(n: usize) -> Self {
        let v = T::one() / T::from_count(n);
        Self { x: vec![v; n] }
    }

    pub fn vertex(n: usize, i: usize) -> Self {
        let mut x = vec![T::zero(); n];
        x[i] = T::one();
        Self { x }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.x
    }

    /// `|Σx − 1|`.
    pub fn residual(&self) -> T {
        (self.x.iter().copied().sum::<T>() - T::one()).abs()
    }
}

impl<T> std::ops::Index<usize> for SimplexPoint<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.x[i]
    }
}

/// Pure-state observable maximization: `Φ₁ = Tr(U ρ₀ U† Θ)` with
/// `ρ₀ = |ψ₀⟩⟨ψ₀|` and populations `x(0) = |c_i(0)|²` in Θ's eigenbasis.
#[derive(Clone, Debug)]
pub struct ObservableProblem<T> {
    spectrum: Spectrum<T>,
    x0: SimplexPoint<T>,
    multiplicity: usize,
}

impl<T: Real> ObservableProblem<T> {
    pub fn new(spectrum: Spectrum<T>, x0: SimplexPoint<T>) -> Result<Self, FlowError> {
        if spectrum.dim() != x0.dim() {
            return Err(FlowError::DimensionMismatch {
                expected: spectrum.dim(),
                found: x0.dim(),
            });
        }
        let multiplicity = spectrum.top_multiplicity();
        Ok(Self {
            spectrum,
            x0,
            multiplicity,
        })
    }

    /// Starts from the barycenter `(1/N)(1, …, 1)`.
    pub fn uniform(spectrum: Spectrum<T>) -> Self {
        let n = spectrum.dim();
        Self::new(spectrum, SimplexPoint::uniform(n)).expect("dimensions agree")
    }

    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    pub fn spectrum(&self) -> &Spectrum<T> {
        &self.spectrum
    }

    /// Descending eigenvalues of Θ.
    pub fn eigenvalues(&self) -> &[T] {
        self.spectrum.values()
    }

    pub fn x0(&self) -> &SimplexPoint<T> {
        &self.x0
    }

    /// Degeneracy `k` of the top eigenvalue.
    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    /// `λ_(1) − λ_{k+1}`.
    pub fn gap(&self) -> T {
        self.spectrum.gap()
    }

    /// Limit point `(1/k)(1, …, 1, 0, …, 0)`.
    pub fn target(&self) -> SimplexPoint<T> {
        let n = self.dim();
        let k = self.multiplicity;
        let w = T::one() / T::from_count(k);
        SimplexPoint::clamped((0..n).map(|i| if i < k { w } else { T::zero() }).collect())
    }

    /// Same problem with every eigenvalue shifted by `c`.
    pub fn shifted(&self, c: T) -> Self {
        Self {
            spectrum: self.spectrum.shifted(c),
            x0: self.x0.clone(),
            multiplicity: self.multiplicity,
        }
    }

    /// `Θ = V diag(λ) V†`.
    pub fn theta(&self) -> Hermitian<T> {
        self.spectrum.reconstruct()
    }

    /// `|ψ₀⟩ = Σ_i √x_i(0) v_i`.
    pub fn psi0(&self) -> Vec<C<T>> {
        let n = self.dim();
        let v = self.spectrum.frame().matrix();
        (0..n)
            .map(|row| (0..n).fold(C::zero(), |acc, i| acc + v[(row, i)] * self.x0[i].sqrt()))
            .collect()
    }

    pub fn rho0(&self) -> Hermitian<T> {
        Hermitian::projector(&self.psi0())
    }

    /// Populations `x_i = ⟨v_i| U ρ₀ U† |v_i⟩` of the evolved state.
    pub fn populations(&self, u: &Unitary<T>) -> SimplexPoint<T> {
        let n = self.dim();
        let psi = self.psi0();
        let v = self.spectrum.frame().matrix();
        let evolved: Vec<C<T>> = (0..n)
            .map(|i| (0..n).fold(C::zero(), |acc, j| acc + u[(i, j)] * psi[j]))
            .collect();
        let x = (0..n)
            .map(|i| {
                (0..n)
                    .fold(C::zero(), |acc, r| acc + v[(r, i)].conj() * evolved[r])
                    .norm_sqr()
            })
            .collect();
        SimplexPoint::clamped(x)
    }
}

/// Gate fidelity maximization: `Φ₂ = Re Tr(A W† U)`.
#[derive(Clone, Debug)]
pub struct GateProblem<T> {
    w: Unitary<T>,
    u0: Unitary<T>,
    a: Hermitian<T>,
    phases: Vec<T>,
    initial_phases: Vec<T>,
    initial_frame: Unitary<T>,
    theta0: T,
}

impl<T: Real> GateProblem<T> {
    pub fn new(w: Unitary<T>, u0: Unitary<T>, a: Hermitian<T>) -> Result<Self, FlowError> {
        let n = w.dim();
        for found in [u0.dim(), a.dim()] {
            if found != n {
                return Err(FlowError::DimensionMismatch { expected: n, found });
            }
        }
        let phases = eig_unitary(&w)?.phases;
        // U0† W = V† diag(e^{−iθ'}) V, so U'(0) = W† U0 = V† diag(e^{iθ'}) V.
        let start = Unitary::new_unchecked(u0.adjoint().matrix() * w.matrix());
        let eig = eig_unitary(&start)?;
        let theta0 = eig
            .phases
            .iter()
            .copied()
            .fold(None, |best: Option<T>, t| match best {
                Some(b) if b.cos() <= t.cos() => Some(b),
                _ => Some(t),
            })
            .expect("nonempty");
        Ok(Self {
            w,
            u0,
            a,
            phases,
            initial_phases: eig.phases,
            initial_frame: eig.frame,
            theta0,
        })
    }

    /// `U₀ = I`, `A = I`.
    pub fn from_target(w: Unitary<T>) -> Result<Self, FlowError> {
        let n = w.dim();
        Self::new(w, Unitary::identity(n), Hermitian::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.w.dim()
    }

    pub fn target(&self) -> &Unitary<T> {
        &self.w
    }

    pub fn u0(&self) -> &Unitary<T> {
        &self.u0
    }

    pub fn weight(&self) -> &Hermitian<T> {
        &self.a
    }

    /// Eigenphases of `W` (`W = V† diag(e^{−iθ_k}) V`).
    pub fn phases(&self) -> &[T] {
        &self.phases
    }

    /// Eigenphases `θ'` of `U₀†W`; `U'(0)` has eigenvalues `e^{iθ'}`. Equal to
    /// [`phases`](Self::phases) when `U₀ = I`.
    pub fn initial_phases(&self) -> &[T] {
        &self.initial_phases
    }

    pub(crate) fn initial_frame(&self) -> &Unitary<T> {
        &self.initial_frame
    }

    /// Phase with the smallest cosine among [`initial_phases`](Self::initial_phases).
    pub fn theta0(&self) -> T {
        self.theta0
    }

    /// `θ₀ = π` up to eigensolver rounding: some mode of `U'(0)` sits on the
    /// antipode and never moves.
    pub fn is_pathological(&self) -> bool {
        T::PI() - self.theta0 <= T::tol(1e-12)
    }

    pub fn has_identity_weight(&self) -> bool {
        let n = self.dim();
        (self.a.matrix() - &ComplexMatrix::identity(n)).frobenius_norm() <= T::tol(1e-14)
    }

    /// `U'(0) = W† U₀`.
    pub fn rotated_start(&self) -> Unitary<T> {
        Unitary::new_unchecked(self.w.adjoint().matrix() * self.u0.matrix())
    }

    /// `U = W U'`.
    pub fn unrotate(&self, u_prime: &Unitary<T>) -> Unitary<T> {
        self.w.compose(u_prime)
    }
}

/// Mixed-state observable maximization on the unitary group; the induced
/// flow on `ρ(s) = U(s) ρ₀ U(s)†` is the double-bracket flow.
#[derive(Clone, Debug)]
pub struct MixedStateProblem<T> {
    rho0: Hermitian<T>,
    theta: Hermitian<T>,
    optimum: T,
}

impl<T: Real> MixedStateProblem<T> {
    /// `ρ₀` must be a density matrix: unit trace and positive semidefinite within `1e-10`.
    pub fn new(rho0: Hermitian<T>, theta: Hermitian<T>) -> Result<Self, FlowError> {
        if rho0.dim() != theta.dim() {
            return Err(FlowError::DimensionMismatch {
                expected: rho0.dim(),
                found: theta.dim(),
            });
        }
        let tr = rho0.trace().re;
        let rs = eigh(&rho0);
        let min = *rs.values().last().expect("nonempty");
        if (tr - T::one()).abs() > T::tol(1e-10) || min < -T::tol(1e-10) {
            return Err(FlowError::NotDensityMatrix {
                trace: tr.to_f64_lossy(),
                min_eigenvalue: min.to_f64_lossy(),
            });
        }
        let ts = eigh(&theta);
        // von Neumann: max over U of Tr(UρU†Θ) pairs both spectra in descending order
        let optimum = rs
            .values()
            .iter()
            .zip(ts.values())
            .map(|(&a, &b)| a * b)
            .sum();
        Ok(Self {
            rho0,
            theta,
            optimum,
        })
    }

    pub fn dim(&self) -> usize {
        self.rho0.dim()
    }

    pub fn rho0(&self) -> &Hermitian<T> {
        &self.rho0
    }

    pub fn theta(&self) -> &Hermitian<T> {
        &self.theta
    }

    /// Global maximum of `Tr(ρΘ)` over the unitary orbit of `ρ₀`.
    pub fn optimum(&self) -> T {
        self.optimum
    }

    /// `ρ = U ρ₀ U†`.
    pub fn evolve(&self, u: &Unitary<T>) -> Hermitian<T> {
        Hermitian::from_hermitian_part(&(&(u.matrix() * self.rho0.matrix()) * &u.adjoint()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::haar_unitary;

    #[test]
    fn simplex_validation() {
        assert!(SimplexPoint::new(vec![0.5f64, 0.5]).is_ok());
        assert!(SimplexPoint::new(vec![0.6f64, 0.5]).is_err());
        let p = SimplexPoint::new(vec![1.0f64 + 5e-15, -5e-15]).unwrap();
        assert_eq!(p[1], 0.0);
        assert!(SimplexPoint::new(vec![1.1f64, -0.1]).is_err());
        assert!(SimplexPoint::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn degenerate_target() {
        let s = Spectrum::diagonal(vec![1.0f64, 1.0, 0.3, 0.0]).unwrap();
        let p = ObservableProblem::uniform(s);
        assert_eq!(p.multiplicity(), 2);
        assert_eq!(p.target().as_slice(), &[0.5, 0.5, 0.0, 0.0]);
        assert!((p.gap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn populations_at_identity_match_x0() {
        let frame: Unitary<f64> = haar_unitary(4, 1).unwrap();
        let s = Spectrum::new(vec![0.9, 0.1, 0.4, -0.2], frame).unwrap();
        let x0 = SimplexPoint::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let p = ObservableProblem::new(s, x0.clone()).unwrap();
        let x = p.populations(&Unitary::identity(4));
        for i in 0..4 {
            assert!((x[i] - x0[i]).abs() < 1e-14);
        }
        assert!((p.rho0().trace().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn theta0_minimizes_cosine() {
        let w = Unitary::from_phases(&[
            C::from_polar(1.0f64, -0.3),
            C::from_polar(1.0, -2.5),
            C::from_polar(1.0, 1.0),
        ])
        .unwrap();
        let g = GateProblem::from_target(w).unwrap();
        assert!((g.theta0() - 2.5).abs() < 1e-12);
        assert!(g.phases().iter().any(|&t| t == g.theta0()));
        assert!(!g.is_pathological());

        let flip = Unitary::from_phases(&[C::new(-1.0f64, 0.0), C::new(1.0, 0.0)]).unwrap();
        assert!(GateProblem::from_target(flip).unwrap().is_pathological());
    }

    #[test]
    fn density_matrix_checks() {
        let theta = Hermitian::<f64>::from_real_diag(&[1.0, 0.0]);
        let bad = Hermitian::<f64>::from_real_diag(&[1.5, -0.5]);
        assert!(matches!(
            MixedStateProblem::new(bad, theta.clone()),
            Err(FlowError::NotDensityMatrix { .. })
        ));
        let good = Hermitian::<f64>::from_real_diag(&[0.25, 0.75]);
        let p = MixedStateProblem::new(good, theta).unwrap();
        assert!((p.optimum() - 0.75).abs() < 1e-15);
    }
}
