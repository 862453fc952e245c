// SPDX-License-Identifier: Apache-2.0

//! Piecewise-constant control of `H(t) = H₀ − ε(t) μ` and its propagators.

use super::DynError;
use crate::matcore::{eigh, expm_skew, ComplexMatrix, Hermitian, Unitary};
use crate::scalar::{c, Real, C};

#[derive(Clone, Debug)]
pub struct ControlSystem<T> {
    h0: Hermitian<T>,
    mu: Hermitian<T>,
    horizon: T,
    intervals: usize,
}

impl<T: Real> ControlSystem<T> {
    /// `intervals ≥ 2` uniform intervals on `[0, horizon]`.
    pub fn new(
        h0: Hermitian<T>,
        mu: Hermitian<T>,
        horizon: T,
        intervals: usize,
    ) -> Result<Self, DynError> {
        if h0.dim() != mu.dim() {
            return Err(DynError::DimensionMismatch {
                expected: h0.dim(),
                found: mu.dim(),
            });
        }
        if intervals < 2 {
            return Err(DynError::TooFewIntervals { intervals });
        }
        if !(horizon > T::zero()) || !horizon.is_finite() {
            return Err(DynError::InvalidHorizon {
                horizon: horizon.to_f64_lossy(),
            });
        }
        Ok(Self {
            h0,
            mu,
            horizon,
            intervals,
        })
    }

    pub fn dim(&self) -> usize {
        self.h0.dim()
    }

    pub fn h0(&self) -> &Hermitian<T> {
        &self.h0
    }

    pub fn mu(&self) -> &Hermitian<T> {
        &self.mu
    }

    pub fn horizon(&self) -> T {
        self.horizon
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn dt(&self) -> T {
        self.horizon / T::from_count(self.intervals)
    }

    /// Grid `t_m = m T / M`, `m = 0, …, M`.
    pub fn times(&self) -> Vec<T> {
        (0..=self.intervals)
            .map(|m| self.horizon * T::from_count(m) / T::from_count(self.intervals))
            .collect()
    }

    /// `H₀ − ε μ`.
    pub fn hamiltonian(&self, eps: T) -> Hermitian<T> {
        Hermitian::from_hermitian_part(&(self.h0.matrix() - &self.mu.scale_real(eps)))
    }

    fn check_field(&self, field: &ControlField<T>) -> Result<(), DynError> {
        if field.len() != self.intervals {
            return Err(DynError::DimensionMismatch {
                expected: self.intervals,
                found: field.len(),
            });
        }
        Ok(())
    }
}

/// Field amplitudes `ε_m`, one per interval.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlField<T> {
    values: Vec<T>,
}

impl<T: Real> ControlField<T> {
    pub fn new(values: Vec<T>) -> Result<Self, DynError> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(DynError::NonFiniteField);
        }
        Ok(Self { values })
    }

    pub fn constant(intervals: usize, value: T) -> Self {
        Self {
            values: vec![value; intervals],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `self + a · other`.
    pub fn add_scaled(&self, a: T, other: &Self) -> Self {
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&x, &y)| x + a * y)
                .collect(),
        }
    }

    /// `(Σ ε_m² Δt)^{1/2}`.
    pub fn l2_norm(&self, dt: T) -> T {
        (self.values.iter().map(|&v| v * v).sum::<T>() * dt).sqrt()
    }
}

#[derive(Clone, Debug)]
pub struct Propagation<T> {
    pub u_final: Unitary<T>,
    /// `U(t_m)`, `m = 0, …, M`; the first entry is `I`.
    pub grid: Vec<Unitary<T>>,
}

/// `U(t_{m+1}) = exp(−i(H₀ − ε_m μ)Δt) U(t_m)`.
pub fn propagate<T: Real>(
    system: &ControlSystem<T>,
    field: &ControlField<T>,
) -> Result<Propagation<T>, DynError> {
    system.check_field(field)?;
    let n = system.dim();
    let dt = system.dt();
    let mut grid = Vec::with_capacity(system.intervals + 1);
    grid.push(Unitary::identity(n));
    for &eps in field.values() {
        let step = expm_skew(&system.hamiltonian(eps).scale(c(T::zero(), -dt)))?;
        let next = step.compose(grid.last().expect("nonempty"));
        grid.push(next);
    }
    Ok(Propagation {
        u_final: grid.last().expect("nonempty").clone(),
        grid,
    })
}

/// `μ(t_m) = −i U(t_m)† μ U(t_m)`.
pub fn heisenberg_dipole<T: Real>(
    system: &ControlSystem<T>,
    grid: &[Unitary<T>],
) -> Vec<ComplexMatrix<T>> {
    let minus_i = c(T::zero(), -T::one());
    grid.iter()
        .map(|u| (&(u.adjoint().matrix() * system.mu.matrix()) * u.matrix()).scale(minus_i))
        .collect()
}

/// `e^{iy} sin(y)/y` evaluated without cancellation.
fn phase_sinc<T: Real>(y: T) -> C<T> {
    let s = if y == T::zero() {
        T::one()
    } else {
        y.sin() / y
    };
    C::from_polar(s, y)
}

/// Interval-integrated Heisenberg dipoles `μ̄_m = ∫_{t_m}^{t_{m+1}} μ(t) dt`,
/// exact for the piecewise-constant Hamiltonian; with them
/// `∂U(T)/∂ε_m = −U(T) μ̄_m`.
pub fn integrated_dipoles<T: Real>(
    system: &ControlSystem<T>,
    field: &ControlField<T>,
) -> Result<(Propagation<T>, Vec<ComplexMatrix<T>>), DynError> {
    let prop = propagate(system, field)?;
    let n = system.dim();
    let dt = system.dt();
    let half = T::lit(0.5);
    let minus_i = c(T::zero(), -T::one());
    let mut out = Vec::with_capacity(system.intervals);
    for (m, &eps) in field.values().iter().enumerate() {
        let spec = eigh(&system.hamiltonian(eps));
        let q = spec.frame().matrix();
        let w = spec.values();
        let mq = &(&q.adjoint() * system.mu.matrix()) * q;
        // ∫₀^Δt e^{iHτ} μ e^{−iHτ} dτ in H's eigenbasis
        let kernel = ComplexMatrix::from_fn(n, |j, k| {
            let y = (w[j] - w[k]) * dt * half;
            mq[(j, k)] * phase_sinc(y).scale(dt)
        });
        let integral = &(q * &kernel) * &q.adjoint();
        let u = prop.grid[m].matrix();
        out.push((&(&u.adjoint() * &integral) * u).scale(minus_i));
    }
    Ok((prop, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{gue_hermitian, pauli};

    fn two_level(eps: f64) -> (ControlSystem<f64>, ControlField<f64>) {
        let sys = ControlSystem::new(
            Hermitian::zeros(2),
            Hermitian::new(pauli::x()).unwrap(),
            1.5,
            10,
        )
        .unwrap();
        (sys, ControlField::constant(10, eps))
    }

    #[test]
    fn free_null_drift_is_identity() {
        let (sys, f) = two_level(0.0);
        let p = propagate(&sys, &f).unwrap();
        assert!((p.u_final.matrix() - &ComplexMatrix::identity(2)).frobenius_norm() < 1e-15);
        assert_eq!(p.grid.len(), 11);
    }

    #[test]
    fn constant_field_closed_form() {
        let e0 = 0.7;
        let (sys, f) = two_level(e0);
        let p = propagate(&sys, &f).unwrap();
        // exp(i a X) = cos a I + i sin a X
        let a: f64 = e0 * 1.5;
        let expect = ComplexMatrix::from_fn(2, |i, j| {
            if i == j {
                C::new(a.cos(), 0.0)
            } else {
                C::new(0.0, a.sin())
            }
        });
        assert!((p.u_final.matrix() - &expect).frobenius_norm() < 1e-13);
    }

    #[test]
    fn dipole_is_anti_hermitian_with_constant_spectrum() {
        let h0 = gue_hermitian::<f64>(3, 1).unwrap();
        let mu = gue_hermitian::<f64>(3, 2).unwrap();
        let sys = ControlSystem::new(h0, mu.clone(), 2.0, 8).unwrap();
        let f = ControlField::new(vec![0.3, -0.2, 0.5, 0.1, 0.0, 0.4, -0.6, 0.2]).unwrap();
        let p = propagate(&sys, &f).unwrap();
        let d = heisenberg_dipole(&sys, &p.grid);
        assert!((&d[0] - &mu.scale(C::new(0.0, -1.0))).frobenius_norm() < 1e-15);
        let ref_vals = eigh(&Hermitian::from_hermitian_part(&mu)).values().to_vec();
        for m in &d {
            assert!(m.anti_hermitian_residual() < 1e-12);
            let h = Hermitian::from_hermitian_part(&m.scale(C::new(0.0, 1.0)));
            for (a, b) in eigh(&h).values().iter().zip(&ref_vals) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn integrated_dipole_matches_quadrature() {
        let h0 = gue_hermitian::<f64>(2, 5).unwrap();
        let mu = gue_hermitian::<f64>(2, 6).unwrap();
        let sys = ControlSystem::new(h0, mu, 1.0, 2).unwrap();
        let f = ControlField::new(vec![0.4, -0.3]).unwrap();
        let (_, bars) = integrated_dipoles(&sys, &f).unwrap();
        // fine midpoint quadrature of −i U(t)† μ U(t) over the first interval
        let fine = 2000;
        let h = 0.5 / fine as f64;
        let ham = sys.hamiltonian(0.4);
        let mut acc = ComplexMatrix::zeros(2);
        for j in 0..fine {
            let tau = (j as f64 + 0.5) * h;
            let u = expm_skew(&ham.scale(C::new(0.0, -tau))).unwrap();
            let term =
                (&(u.adjoint().matrix() * sys.mu().matrix()) * u.matrix()).scale(C::new(0.0, -h));
            acc = &acc + &term;
        }
        assert!((&acc - &bars[0]).frobenius_norm() < 1e-7);
    }

    #[test]
    fn validation() {
        let h = Hermitian::<f64>::zeros(2);
        assert!(ControlSystem::new(h.clone(), h.clone(), 1.0, 1).is_err());
        assert!(ControlSystem::new(h.clone(), h.clone(), 0.0, 4).is_err());
        assert!(ControlSystem::new(h.clone(), Hermitian::zeros(3), 1.0, 4).is_err());
        assert!(ControlField::new(vec![f64::NAN]).is_err());
        let sys = ControlSystem::new(h.clone(), h, 1.0, 4).unwrap();
        assert!(propagate(&sys, &ControlField::constant(3, 0.0)).is_err());
    }
}
