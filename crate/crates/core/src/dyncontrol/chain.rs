// SPDX-License-Identifier: Apache-2.0

//! First-order check of `du/ds = G ∇Φ(u)` for one explicit gradient step.

use super::gradient::Objective;
use super::system::{integrated_dipoles, propagate, ControlField, ControlSystem};
use super::DynError;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainRuleCheck<T> {
    /// `‖vec(ΔU)/δs − G∇Φ‖ / ‖G∇Φ‖`; `None` at a critical point.
    pub residual: Option<T>,
    pub predicted_norm: T,
    pub observed_norm: T,
}

impl<T: Real> ChainRuleCheck<T> {
    pub fn is_critical(&self) -> bool {
        self.residual.is_none()
    }
}

/// Takes `ε ← ε + δs ∇Φ` and compares the change in `U(T)` with `G ∇Φ(u)`.
///
/// `u` is `U(T)` realified by stacking real and imaginary parts; `G` is the
/// realified Gram `(1/Δt) Σ_m w_m w_mᵀ` of `w_m = vec(∂U(T)/∂ε_m)`, which is
/// what the chain rule produces for piecewise-constant fields, and `∇Φ` is the
/// Euclidean gradient in `u`.
pub fn check_chain_rule<T: Real>(
    system: &ControlSystem<T>,
    field: &ControlField<T>,
    objective: &Objective<T>,
    ds: T,
) -> Result<ChainRuleCheck<T>, DynError> {
    if !(ds > T::zero()) || ds > T::lit(1e-4) {
        return Err(DynError::InvalidStep {
            step: ds.to_f64_lossy(),
        });
    }
    let grad = objective.field_gradient(system, field)?;
    let (prop, bars) = integrated_dipoles(system, field)?;
    let u = &prop.u_final;
    let nabla = objective.euclidean_gradient(u).to_real_vec();
    let dt = system.dt();
    let mut predicted = vec![T::zero(); nabla.len()];
    for bar in &bars {
        let w = (u.matrix() * bar).scale_real(-T::one()).to_real_vec();
        let coef = w.iter().zip(&nabla).map(|(&a, &b)| a * b).sum::<T>() / dt;
        for (p, &wi) in predicted.iter_mut().zip(&w) {
            *p = *p + coef * wi;
        }
    }
    let stepped = propagate(system, &field.add_scaled(ds, &grad))?;
    let delta = (stepped.u_final.matrix() - u.matrix()).to_real_vec();
    let norm = |v: &[T]| v.iter().map(|&x| x * x).sum::<T>().sqrt();
    let predicted_norm = norm(&predicted);
    let observed: Vec<T> = delta.iter().map(|&d| d / ds).collect();
    let observed_norm = norm(&observed);
    let diff: Vec<T> = observed
        .iter()
        .zip(&predicted)
        .map(|(&a, &b)| a - b)
        .collect();
    let residual = if predicted_norm > T::tol(1e-14) {
        Some(norm(&diff) / predicted_norm)
    } else {
        None
    };
    Ok(ChainRuleCheck {
        residual,
        predicted_norm,
        observed_norm,
    })
}
