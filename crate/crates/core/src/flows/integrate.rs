// SPDX-License-Identifier: Apache-2.0

//! Numerical integration of the flows: Runge–Kutta–Munthe-Kaas on the
//! unitary group and classical RK4 on the simplex.

use super::objective::{
    generator_gate, generator_observable, phi1, phi1_unitary, phi2_rotated, rhs_replicator,
};
use super::problem::{GateProblem, MixedStateProblem, ObservableProblem, SimplexPoint};
use super::{analytic, FlowError};
use crate::complexity::{distance_gate, distance_observable};
use crate::matcore::{expm_skew, ComplexMatrix, Hermitian, Unitary};
use crate::scalar::Real;

/// A flow that can be stepped and observed.
pub trait KinematicFlow<T: Real> {
    type State: Clone;

    fn initial_state(&self) -> Self::State;

    /// Norm of the right-hand side at `state`; drives the step size.
    fn speed(&self, state: &Self::State) -> T;

    fn advance(&self, state: &Self::State, h: T) -> Result<Self::State, FlowError>;

    fn objective(&self, state: &Self::State) -> T;

    /// Distance to the limit set of the flow.
    fn distance(&self, state: &Self::State) -> T;

    /// Deviation from the manifold the state must stay on.
    fn invariant_residual(&self, state: &Self::State) -> T;

    /// Closed-form state at `s`, when one exists.
    fn exact_state(&self, _s: T) -> Option<Result<Self::State, FlowError>> {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorOptions<T> {
    /// Upper bound on the step.
    pub max_step: T,
    /// The step is at most `step_scale / ‖rhs‖`.
    pub step_scale: T,
    /// Integration stops with a diagnostic when the step falls below this.
    pub min_step: T,
    /// Keep every `record_every`-th state (the last state is always kept).
    pub record_every: usize,
}

impl<T: Real> Default for IntegratorOptions<T> {
    fn default() -> Self {
        Self {
            max_step: T::lit(0.01),
            step_scale: T::lit(0.1),
            min_step: T::lit(1e-12),
            record_every: 1,
        }
    }
}

impl<T: Real> IntegratorOptions<T> {
    /// Constant step `h` regardless of the field's magnitude.
    pub fn fixed(h: T) -> Self {
        Self {
            max_step: h,
            step_scale: T::infinity(),
            min_step: T::zero(),
            record_every: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample<S, T> {
    pub s: T,
    pub state: S,
    pub objective: T,
    pub distance: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepStat<T> {
    pub s: T,
    pub h: T,
    pub residual: T,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Termination {
    Completed,
    /// The adaptive step shrank below the floor; the trajectory ends early.
    StepUnderflow {
        s: f64,
        h: f64,
    },
    /// A step produced a non-finite state.
    NonFinite {
        s: f64,
    },
}

#[derive(Clone, Debug)]
pub struct FlowTrajectory<S, T> {
    pub samples: Vec<Sample<S, T>>,
    pub steps: Vec<StepStat<T>>,
    pub termination: Termination,
}

impl<S, T: Real> FlowTrajectory<S, T> {
    pub fn is_complete(&self) -> bool {
        self.termination == Termination::Completed
    }

    pub fn last(&self) -> &Sample<S, T> {
        self.samples
            .last()
            .expect("a trajectory always holds its initial sample")
    }

    /// Largest invariant residual over all steps, including the initial state.
    pub fn max_residual(&self) -> T {
        self.steps
            .iter()
            .map(|st| st.residual)
            .fold(T::zero(), T::max)
    }
}

/// Integrates `flow` on `[0, s_max]`.
pub fn integrate<T: Real, F: KinematicFlow<T>>(
    flow: &F,
    s_max: T,
    opts: &IntegratorOptions<T>,
) -> Result<FlowTrajectory<F::State, T>, FlowError> {
    integrate_until(flow, s_max, opts, |_| false)
}

/// Like [`integrate`], but ends (as [`Termination::Completed`]) at the first
/// recorded sample for which `stop` holds.
pub fn integrate_until<T: Real, F: KinematicFlow<T>>(
    flow: &F,
    s_max: T,
    opts: &IntegratorOptions<T>,
    mut stop: impl FnMut(&Sample<F::State, T>) -> bool,
) -> Result<FlowTrajectory<F::State, T>, FlowError> {
    if !(s_max >= T::zero()) || !s_max.is_finite() {
        return Err(FlowError::InvalidHorizon {
            s_max: s_max.to_f64_lossy(),
        });
    }
    let record = |s: T, state: F::State| Sample {
        objective: flow.objective(&state),
        distance: flow.distance(&state),
        s,
        state,
    };
    let mut state = flow.initial_state();
    let r0 = flow.invariant_residual(&state);
    let mut samples = vec![record(T::zero(), state.clone())];
    let mut steps = vec![StepStat {
        s: T::zero(),
        h: T::zero(),
        residual: r0,
    }];
    let mut s = T::zero();
    let mut count = 0usize;
    let every = opts.record_every.max(1);
    let mut halted = stop(&samples[0]);
    let termination = loop {
        if halted {
            break Termination::Completed;
        }
        let remaining = s_max - s;
        let slack = opts.min_step.max(T::epsilon() * s_max);
        if remaining <= slack {
            break Termination::Completed;
        }
        let speed = flow.speed(&state);
        if !speed.is_finite() {
            break Termination::NonFinite {
                s: s.to_f64_lossy(),
            };
        }
        let mut h = opts.max_step;
        if speed > T::zero() {
            h = h.min(opts.step_scale / speed);
        }
        if h < opts.min_step {
            break Termination::StepUnderflow {
                s: s.to_f64_lossy(),
                h: h.to_f64_lossy(),
            };
        }
        let last = h + slack >= remaining;
        if last {
            h = remaining;
        }
        match flow.advance(&state, h) {
            Ok(next) => state = next,
            Err(_) => {
                break Termination::NonFinite {
                    s: s.to_f64_lossy(),
                }
            }
        }
        s = if last { s_max } else { s + h };
        count += 1;
        steps.push(StepStat {
            s,
            h,
            residual: flow.invariant_residual(&state),
        });
        if count.is_multiple_of(every) || last {
            samples.push(record(s, state.clone()));
            halted = stop(samples.last().expect("just pushed"));
        }
    };
    if samples.last().map(|x| x.s) != Some(s) {
        samples.push(record(s, state));
    }
    Ok(FlowTrajectory {
        samples,
        steps,
        termination,
    })
}

/// One RKMK4 step for `U̇ = U ξ(U)` with the update `U ↦ U exp(Ω)`.
pub fn rkmk4_step<T: Real>(
    u: &Unitary<T>,
    h: T,
    xi: impl Fn(&Unitary<T>) -> ComplexMatrix<T>,
) -> Result<Unitary<T>, FlowError> {
    let half = T::lit(0.5);
    // Ω̇ = dexp⁻¹_{−Ω}(ξ) ≈ ξ + ½[Ω, ξ] + (1/12)[Ω, [Ω, ξ]]
    let dexpinv = |omega: &ComplexMatrix<T>, x: &ComplexMatrix<T>| {
        let c1 = ComplexMatrix::commutator(omega, x);
        let c2 = ComplexMatrix::commutator(omega, &c1);
        let mut out = x.clone();
        out.axpy(crate::scalar::cr(half), &c1);
        out.axpy(crate::scalar::cr(T::one() / T::lit(12.0)), &c2);
        out
    };
    let at = |omega: &ComplexMatrix<T>| -> Result<Unitary<T>, FlowError> {
        Ok(u.compose(&expm_skew(omega)?))
    };

    let k1 = xi(u).scale_real(h);
    let o2 = k1.scale_real(half);
    let k2 = dexpinv(&o2, &xi(&at(&o2)?)).scale_real(h);
    let o3 = k2.scale_real(half);
    let k3 = dexpinv(&o3, &xi(&at(&o3)?)).scale_real(h);
    let k4 = dexpinv(&k3, &xi(&at(&k3)?)).scale_real(h);

    let mut omega = k1;
    omega.axpy(crate::scalar::cr(T::lit(2.0)), &k2);
    omega.axpy(crate::scalar::cr(T::lit(2.0)), &k3);
    omega.axpy(crate::scalar::cr(T::one()), &k4);
    let omega = omega.scale_real(T::one() / T::lit(6.0));
    if !omega.is_finite() {
        return Err(FlowError::NonFinite);
    }
    at(&omega)
}

/// Classical RK4 step for the replicator equation.
pub fn rk4_replicator_step<T: Real>(x: &[T], lambda: &[T], h: T) -> Vec<T> {
    let half = T::lit(0.5);
    let shift = |base: &[T], k: &[T], a: T| -> Vec<T> {
        base.iter().zip(k).map(|(&b, &d)| b + a * d).collect()
    };
    let k1 = rhs_replicator(x, lambda);
    let k2 = rhs_replicator(&shift(x, &k1, half * h), lambda);
    let k3 = rhs_replicator(&shift(x, &k2, half * h), lambda);
    let k4 = rhs_replicator(&shift(x, &k3, h), lambda);
    let sixth = h / T::lit(6.0);
    let two = T::lit(2.0);
    (0..x.len())
        .map(|i| x[i] + sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]))
        .collect()
}

fn euclid<T: Real>(v: &[T]) -> T {
    v.iter().map(|&a| a * a).sum::<T>().sqrt()
}

/// Replicator representation: the state is the population vector.
impl<T: Real> KinematicFlow<T> for ObservableProblem<T> {
    type State = SimplexPoint<T>;

    fn initial_state(&self) -> SimplexPoint<T> {
        self.x0().clone()
    }

    fn speed(&self, x: &SimplexPoint<T>) -> T {
        euclid(&rhs_replicator(x.as_slice(), self.eigenvalues()))
    }

    fn advance(&self, x: &SimplexPoint<T>, h: T) -> Result<SimplexPoint<T>, FlowError> {
        let next = rk4_replicator_step(x.as_slice(), self.eigenvalues(), h);
        if next.iter().any(|v| !v.is_finite()) {
            return Err(FlowError::NonFinite);
        }
        Ok(SimplexPoint::clamped(next))
    }

    fn objective(&self, x: &SimplexPoint<T>) -> T {
        phi1(x, self.eigenvalues())
    }

    fn distance(&self, x: &SimplexPoint<T>) -> T {
        distance_observable(x, self)
    }

    fn invariant_residual(&self, x: &SimplexPoint<T>) -> T {
        x.residual()
    }

    fn exact_state(&self, s: T) -> Option<Result<SimplexPoint<T>, FlowError>> {
        Some(Ok(analytic::analytic_x(s, self)))
    }
}

/// Unitary-group representation of the observable flow, `U̇ = −U[ρ₀, U†ΘU]`.
#[derive(Clone, Debug)]
pub struct UnitaryObservableFlow<'a, T> {
    problem: &'a ObservableProblem<T>,
    rho0: Hermitian<T>,
    theta: Hermitian<T>,
}

impl<'a, T: Real> UnitaryObservableFlow<'a, T> {
    pub fn new(problem: &'a ObservableProblem<T>) -> Self {
        Self {
            problem,
            rho0: problem.rho0(),
            theta: problem.theta(),
        }
    }

    pub fn problem(&self) -> &ObservableProblem<T> {
        self.problem
    }
}

impl<T: Real> KinematicFlow<T> for UnitaryObservableFlow<'_, T> {
    type State = Unitary<T>;

    fn initial_state(&self) -> Unitary<T> {
        Unitary::identity(self.problem.dim())
    }

    fn speed(&self, u: &Unitary<T>) -> T {
        generator_observable(u, &self.rho0, &self.theta).frobenius_norm()
    }

    fn advance(&self, u: &Unitary<T>, h: T) -> Result<Unitary<T>, FlowError> {
        rkmk4_step(u, h, |v| generator_observable(v, &self.rho0, &self.theta))
    }

    fn objective(&self, u: &Unitary<T>) -> T {
        phi1_unitary(u, self.problem)
    }

    fn distance(&self, u: &Unitary<T>) -> T {
        distance_observable(&self.problem.populations(u), self.problem)
    }

    fn invariant_residual(&self, u: &Unitary<T>) -> T {
        u.unitarity_residual()
    }
}

/// Gate flow, integrated in the rotated frame `U' = W†U` where it reads
/// `U̇' = A − U'AU'`. States are `U'`; use [`GateProblem::unrotate`] for `U`.
impl<T: Real> KinematicFlow<T> for GateProblem<T> {
    type State = Unitary<T>;

    fn initial_state(&self) -> Unitary<T> {
        self.rotated_start()
    }

    fn speed(&self, u: &Unitary<T>) -> T {
        generator_gate(u, self.weight()).frobenius_norm()
    }

    fn advance(&self, u: &Unitary<T>, h: T) -> Result<Unitary<T>, FlowError> {
        rkmk4_step(u, h, |v| generator_gate(v, self.weight()))
    }

    fn objective(&self, u: &Unitary<T>) -> T {
        phi2_rotated(u, self)
    }

    fn distance(&self, u: &Unitary<T>) -> T {
        distance_gate(u)
    }

    fn invariant_residual(&self, u: &Unitary<T>) -> T {
        u.unitarity_residual()
    }

    fn exact_state(&self, s: T) -> Option<Result<Unitary<T>, FlowError>> {
        self.has_identity_weight()
            .then(|| analytic::analytic_gate_rotated(s, self))
    }
}

/// Mixed-state flow on the unitary group; `ρ(s) = Uρ₀U†` follows the double bracket.
impl<T: Real> KinematicFlow<T> for MixedStateProblem<T> {
    type State = Unitary<T>;

    fn initial_state(&self) -> Unitary<T> {
        Unitary::identity(self.dim())
    }

    fn speed(&self, u: &Unitary<T>) -> T {
        generator_observable(u, self.rho0(), self.theta()).frobenius_norm()
    }

    fn advance(&self, u: &Unitary<T>, h: T) -> Result<Unitary<T>, FlowError> {
        rkmk4_step(u, h, |v| generator_observable(v, self.rho0(), self.theta()))
    }

    fn objective(&self, u: &Unitary<T>) -> T {
        ComplexMatrix::trace_of_product(&self.evolve(u), self.theta()).re
    }

    /// Gap to the global optimum.
    fn distance(&self, u: &Unitary<T>) -> T {
        self.optimum() - self.objective(u)
    }

    fn invariant_residual(&self, u: &Unitary<T>) -> T {
        u.unitarity_residual()
    }
}
