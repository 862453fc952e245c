// SPDX-License-Identifier: Apache-2.0

//! Field-space gradients of the kinematic objectives.

use super::system::{integrated_dipoles, propagate, ControlField, ControlSystem};
use super::DynError;
use crate::matcore::{eigh, ComplexMatrix, Hermitian, Unitary};
use crate::scalar::{cr, Real};

/// Objective evaluated on the final propagator `U(T)`.
#[derive(Clone, Debug)]
pub enum Objective<T> {
    /// `Φ₁ = Tr(U ρ₀ U† Θ)`.
    Observable {
        rho0: Hermitian<T>,
        theta: Hermitian<T>,
    },
    /// `Φ₂ = Re Tr(A W† U)`.
    Gate { w: Unitary<T>, a: Hermitian<T> },
}

impl<T: Real> Objective<T> {
    pub fn observable(rho0: Hermitian<T>, theta: Hermitian<T>) -> Self {
        Self::Observable { rho0, theta }
    }

    pub fn gate(w: Unitary<T>, a: Hermitian<T>) -> Self {
        Self::Gate { w, a }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Observable { rho0, .. } => rho0.dim(),
            Self::Gate { w, .. } => w.dim(),
        }
    }

    pub fn value(&self, u: &Unitary<T>) -> T {
        match self {
            Self::Observable { rho0, theta } => {
                let rho_t = &(u.matrix() * rho0.matrix()) * &u.adjoint();
                ComplexMatrix::trace_of_product(&rho_t, theta).re
            }
            Self::Gate { w, a } => {
                ComplexMatrix::trace_of_product(a, &(w.adjoint().matrix() * u.matrix())).re
            }
        }
    }

    /// Euclidean gradient with respect to `U` viewed as a real vector
    /// (`dΦ = Re Tr(G† dU)`): `2ΘUρ₀` or `WA`.
    pub fn euclidean_gradient(&self, u: &Unitary<T>) -> ComplexMatrix<T> {
        match self {
            Self::Observable { rho0, theta } => {
                (&(theta.matrix() * u.matrix()) * rho0.matrix()).scale_real(T::lit(2.0))
            }
            Self::Gate { w, a } => w.matrix() * a.matrix(),
        }
    }

    /// Distance to the optimum: the gap to `max Tr(UρU†Θ)` for `Φ₁`,
    /// `‖W†U − I‖_F` for `Φ₂`.
    pub fn distance(&self, u: &Unitary<T>) -> T {
        match self {
            Self::Observable { rho0, theta } => {
                let r = eigh(rho0);
                let t = eigh(theta);
                let best: T = r
                    .values()
                    .iter()
                    .zip(t.values())
                    .map(|(&a, &b)| a * b)
                    .sum();
                best - self.value(u)
            }
            Self::Gate { w, .. } => {
                let d = w.adjoint().matrix() * u.matrix();
                (&d - &ComplexMatrix::identity(d.dim())).frobenius_norm()
            }
        }
    }

    fn check_dim(&self, system: &ControlSystem<T>) -> Result<(), DynError> {
        if self.dim() != system.dim() {
            return Err(DynError::DimensionMismatch {
                expected: system.dim(),
                found: self.dim(),
            });
        }
        Ok(())
    }

    /// Interval-averaged gradient `(∂Φ/∂ε_m)/Δt`.
    pub fn field_gradient(
        &self,
        system: &ControlSystem<T>,
        field: &ControlField<T>,
    ) -> Result<ControlField<T>, DynError> {
        match self {
            Self::Observable { rho0, theta } => grad_phi1(system, field, rho0, theta),
            Self::Gate { w, a } => grad_phi2(system, field, w, a),
        }
    }
}

/// Sums `Tr(C μ̄_m)/Δt`, checking that each is real.
fn contract<T: Real>(
    c: &ComplexMatrix<T>,
    bars: &[ComplexMatrix<T>],
    dt: T,
) -> Result<ControlField<T>, DynError> {
    let scale = c.frobenius_norm()
        * bars
            .iter()
            .map(|b| b.frobenius_norm())
            .fold(T::zero(), T::max);
    let mut out = Vec::with_capacity(bars.len());
    for b in bars {
        let z = ComplexMatrix::trace_of_product(c, b);
        if z.im.abs() > T::tol(1e-10) * (T::one() + scale) {
            return Err(DynError::ComplexGradient {
                imag: z.im.to_f64_lossy(),
            });
        }
        out.push(z.re / dt);
    }
    ControlField::new(out)
}

/// `δΦ₁/δε(t) = Tr([Θ(T), ρ₀] μ(t))` with `Θ(T) = U(T)† Θ U(T)`, averaged
/// exactly over each interval.
pub fn grad_phi1<T: Real>(
    system: &ControlSystem<T>,
    field: &ControlField<T>,
    rho0: &Hermitian<T>,
    theta: &Hermitian<T>,
) -> Result<ControlField<T>, DynError> {
    Objective::observable(rho0.clone(), theta.clone()).check_dim(system)?;
    let (prop, bars) = integrated_dipoles(system, field)?;
    let u = &prop.u_final;
    let theta_t = &(u.adjoint().matrix() * theta.matrix()) * u.matrix();
    let c = ComplexMatrix::commutator(&theta_t, rho0);
    contract(&c, &bars, system.dt())
}

/// `δΦ₂/δε(t) = −½ Tr((A W†U − U†W A) μ(t))`, averaged exactly over each interval.
pub fn grad_phi2<T: Real>(
    system: &ControlSystem<T>,
    field: &ControlField<T>,
    w: &Unitary<T>,
    a: &Hermitian<T>,
) -> Result<ControlField<T>, DynError> {
    Objective::gate(w.clone(), a.clone()).check_dim(system)?;
    let (prop, bars) = integrated_dipoles(system, field)?;
    let x = a.matrix() * &(w.adjoint().matrix() * prop.u_final.matrix());
    let c = (&x - &x.adjoint()).scale(cr(T::lit(-0.5)));
    contract(&c, &bars, system.dt())
}

/// `Φ(U(T))` for a field.
pub fn objective_value<T: Real>(
    system: &ControlSystem<T>,
    field: &ControlField<T>,
    objective: &Objective<T>,
) -> Result<T, DynError> {
    objective.check_dim(system)?;
    Ok(objective.value(&propagate(system, field)?.u_final))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{gue_hermitian, haar_unitary, pauli};

    fn system(seed: u64, n: usize, m: usize) -> (ControlSystem<f64>, ControlField<f64>) {
        let sys = ControlSystem::new(
            gue_hermitian(n, seed).unwrap(),
            gue_hermitian(n, seed + 1).unwrap(),
            2.0,
            m,
        )
        .unwrap();
        let vals = (0..m)
            .map(|i| 0.3 * ((i as f64) * 0.7 + seed as f64).sin())
            .collect();
        (sys, ControlField::new(vals).unwrap())
    }

    fn fd(sys: &ControlSystem<f64>, f: &ControlField<f64>, obj: &Objective<f64>, m: usize) -> f64 {
        let h = 1e-5;
        let mut e = vec![0.0; f.len()];
        e[m] = 1.0;
        let e = ControlField::new(e).unwrap();
        let plus = objective_value(sys, &f.add_scaled(h, &e), obj).unwrap();
        let minus = objective_value(sys, &f.add_scaled(-h, &e), obj).unwrap();
        (plus - minus) / (2.0 * h) / sys.dt()
    }

    #[test]
    fn phi1_gradient_matches_finite_difference() {
        let (sys, f) = system(3, 3, 16);
        let psi = haar_unitary::<f64>(3, 9).unwrap().matrix().column(0);
        let obj = Objective::observable(Hermitian::projector(&psi), gue_hermitian(3, 10).unwrap());
        let g = obj.field_gradient(&sys, &f).unwrap();
        let scale = g.values().iter().fold(0.0f64, |a, b| a.max(b.abs()));
        for m in 0..16 {
            assert!((g.values()[m] - fd(&sys, &f, &obj, m)).abs() <= 1e-5 * scale);
        }
    }

    #[test]
    fn phi2_gradient_matches_and_scales_linearly() {
        let (sys, f) = system(5, 2, 16);
        let w = haar_unitary::<f64>(2, 11).unwrap();
        let a = gue_hermitian::<f64>(2, 12).unwrap();
        let obj = Objective::gate(w.clone(), a.clone());
        let g = obj.field_gradient(&sys, &f).unwrap();
        let scale = g.values().iter().fold(0.0f64, |a, b| a.max(b.abs()));
        for m in 0..16 {
            assert!((g.values()[m] - fd(&sys, &f, &obj, m)).abs() <= 1e-5 * scale);
        }
        let a3 = Hermitian::from_hermitian_part(&a.scale_real(3.0));
        let g3 = grad_phi2(&sys, &f, &w, &a3).unwrap();
        for (x, y) in g.values().iter().zip(g3.values()) {
            assert!((3.0 * x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn critical_points_have_zero_gradient() {
        let sys = ControlSystem::new(
            Hermitian::new(pauli::z()).unwrap(),
            Hermitian::from_real_diag(&[0.5, -0.2]),
            1.0,
            8,
        )
        .unwrap();
        let f = ControlField::constant(8, 0.0);
        let rho0 = Hermitian::from_real_diag(&[1.0, 0.0]);
        let theta = Hermitian::from_real_diag(&[0.0, 1.0]);
        let g = grad_phi1(&sys, &f, &rho0, &theta).unwrap();
        assert!(g.values().iter().all(|v: &f64| v.abs() < 1e-15));
        let u = propagate(&sys, &f).unwrap().u_final;
        let g2 = grad_phi2(&sys, &f, &u, &Hermitian::identity(2)).unwrap();
        assert!(g2.values().iter().all(|v: &f64| v.abs() < 1e-14));
    }
}
