// SPDX-License-Identifier: Apache-2.0

//! Explicit-Euler gradient ascent in field space with backtracking.

use super::gradient::Objective;
use super::system::{propagate, ControlField, ControlSystem};
use super::DynError;
use crate::complexity::HaltSpec;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AscentOptions<T> {
    /// Initial step `σ`.
    pub step: T,
    pub max_iters: usize,
    /// Stop once `‖∇Φ‖` falls below this.
    pub grad_tol: T,
    /// Step multiplier after an accepted iterate.
    pub growth: T,
    /// Consecutive rejected steps tolerated before aborting.
    pub max_failures: usize,
}

impl<T: Real> Default for AscentOptions<T> {
    fn default() -> Self {
        Self {
            step: T::lit(0.1),
            max_iters: 10_000,
            grad_tol: T::lit(1e-8),
            growth: T::lit(1.5),
            max_failures: 10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Iterate<T> {
    pub iteration: usize,
    pub phi: T,
    /// `(Σ_m g_m² Δt)^{1/2}`.
    pub grad_norm: T,
    pub distance: T,
    pub step: T,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AscentTermination {
    GradientTolerance,
    /// Distance to the optimum fell below `ε_p`.
    Precision,
    MaxIterations,
    /// `max_failures` consecutive steps failed to increase `Φ`.
    Diverged {
        failures: usize,
    },
}

#[derive(Clone, Debug)]
pub struct AscentHistory<T> {
    /// Accepted iterates; the first entry is the starting field.
    pub iterates: Vec<Iterate<T>>,
    pub field: ControlField<T>,
    pub termination: AscentTermination,
}

pub fn gradient_ascent<T: Real>(
    system: &ControlSystem<T>,
    field0: &ControlField<T>,
    objective: &Objective<T>,
    halt: &HaltSpec<T>,
    opts: &AscentOptions<T>,
) -> Result<AscentHistory<T>, DynError> {
    if !(opts.step > T::zero()) {
        return Err(DynError::InvalidStep {
            step: opts.step.to_f64_lossy(),
        });
    }
    let dt = system.dt();
    let eval = |f: &ControlField<T>| -> Result<(T, T), DynError> {
        let u = propagate(system, f)?.u_final;
        Ok((objective.value(&u), objective.distance(&u)))
    };
    let mut field = field0.clone();
    let (mut phi, mut distance) = eval(&field)?;
    let mut grad = objective.field_gradient(system, &field)?;
    let mut step = opts.step;
    let mut iterates = vec![Iterate {
        iteration: 0,
        phi,
        grad_norm: grad.l2_norm(dt),
        distance,
        step,
    }];
    let mut failures = 0;
    let termination = loop {
        let last = iterates.last().expect("nonempty");
        if last.grad_norm < opts.grad_tol {
            break AscentTermination::GradientTolerance;
        }
        if distance < halt.epsilon_p {
            break AscentTermination::Precision;
        }
        if last.iteration >= opts.max_iters {
            break AscentTermination::MaxIterations;
        }
        let trial = field.add_scaled(step, &grad);
        let (phi_t, dist_t) = eval(&trial)?;
        if phi_t > phi {
            field = trial;
            phi = phi_t;
            distance = dist_t;
            grad = objective.field_gradient(system, &field)?;
            failures = 0;
            let iteration = last.iteration + 1;
            iterates.push(Iterate {
                iteration,
                phi,
                grad_norm: grad.l2_norm(dt),
                distance,
                step,
            });
            step = step * opts.growth;
        } else {
            failures += 1;
            if failures >= opts.max_failures {
                break AscentTermination::Diverged { failures };
            }
            step = step * T::lit(0.5);
        }
    };
    Ok(AscentHistory {
        iterates,
        field,
        termination,
    })
}
