// SPDX-License-Identifier: Apache-2.0

//! Measured halting times along integrated trajectories.

use crate::flows::{
    integrate_until, FlowTrajectory, GateProblem, IntegratorOptions, KinematicFlow,
    ObservableProblem, UnitaryObservableFlow,
};
use crate::scalar::Real;

use super::bounds::{bound_tc_gate, observable_bounds, BoundSet, HaltSpec};
use super::distance::AttractingRegion;
use super::ComplexityError;

/// A flow with a halting rule and closed-form time bounds.
pub trait Halting<T: Real>:
    KinematicFlow<T> + AttractingRegion<T, Point = <Self as KinematicFlow<T>>::State>
{
    fn bounds(&self, halt: &HaltSpec<T>) -> BoundSet<T>;
}

impl<T: Real> Halting<T> for ObservableProblem<T> {
    fn bounds(&self, halt: &HaltSpec<T>) -> BoundSet<T> {
        observable_bounds(
            self.spectrum(),
            self.multiplicity(),
            self.x0(),
            halt.epsilon_p,
        )
    }
}

impl<T: Real> Halting<T> for UnitaryObservableFlow<'_, T> {
    fn bounds(&self, halt: &HaltSpec<T>) -> BoundSet<T> {
        self.problem().bounds(halt)
    }
}

/// Bounds hold for `A = I`; weighted problems report `+∞`.
impl<T: Real> Halting<T> for GateProblem<T> {
    fn bounds(&self, halt: &HaltSpec<T>) -> BoundSet<T> {
        if !self.has_identity_weight() {
            return BoundSet::new(T::infinity(), T::zero());
        }
        let t = bound_tc_gate(self.theta0(), halt.gate_epsilon(), self.dim())
            .map(|r| r.t_bound)
            .unwrap_or(T::infinity());
        BoundSet::new(t, T::zero())
    }
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport<S, T> {
    /// First `s` satisfying the halting rule; `+∞` if never met.
    pub t_measured: T,
    pub bound_tc_eps: T,
    pub bound_tc_region: T,
    pub bound_tc_total: T,
    pub converged: bool,
    pub trajectory: FlowTrajectory<S, T>,
}

/// Width of the bisection bracket around the halting time.
pub const HALT_RESOLUTION: f64 = 1e-6;

fn halted<T: Real, F: Halting<T>>(flow: &F, halt: &HaltSpec<T>, state: &F::State) -> bool {
    flow.distance(state) <= halt.epsilon_p
        && (!halt.require_region || flow.in_attracting_region(state))
}

/// Integrates until the halting rule holds (or `s_max`), then bisects the
/// bracketing interval to [`HALT_RESOLUTION`], evaluating intermediate states
/// from the closed form where one exists and by a single step from the left
/// end of the bracket otherwise.
pub fn measure_tc<T: Real, F: Halting<T>>(
    flow: &F,
    halt: &HaltSpec<T>,
    s_max: T,
    opts: &IntegratorOptions<T>,
) -> Result<ConvergenceReport<F::State, T>, ComplexityError> {
    let opts = IntegratorOptions {
        record_every: 1,
        ..*opts
    };
    let trajectory = integrate_until(flow, s_max, &opts, |smp| halted(flow, halt, &smp.state))?;
    let bounds = flow.bounds(halt);
    let report = |t_measured: T, converged: bool, trajectory| ConvergenceReport {
        t_measured,
        bound_tc_eps: bounds.eps,
        bound_tc_region: bounds.region,
        bound_tc_total: bounds.total,
        converged,
        trajectory,
    };
    let samples = &trajectory.samples;
    let Some(j) = samples
        .iter()
        .position(|smp| halted(flow, halt, &smp.state))
    else {
        return Ok(report(T::infinity(), false, trajectory));
    };
    if j == 0 {
        return Ok(report(T::zero(), true, trajectory));
    }
    let left = &samples[j - 1];
    let (mut lo, mut hi) = (left.s, samples[j].s);
    let state_at = |s: T| -> Result<F::State, ComplexityError> {
        match flow.exact_state(s) {
            Some(r) => Ok(r?),
            None => Ok(flow.advance(&left.state, s - left.s)?),
        }
    };
    let resolution = T::lit(HALT_RESOLUTION);
    while hi - lo > resolution {
        let mid = (lo + hi) / T::lit(2.0);
        if halted(flow, halt, &state_at(mid)?) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(report(hi, true, trajectory))
}
