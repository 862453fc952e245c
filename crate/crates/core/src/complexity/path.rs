// SPDX-License-Identifier: Apache-2.0

//! Arc length of flow trajectories.

use crate::flows::{FlowTrajectory, KinematicFlow};
use crate::matcore::{ComplexMatrix, Unitary};
use crate::scalar::Real;

use super::ComplexityError;

/// Trajectories must be sampled at least this densely per unit `s`.
pub const MIN_SAMPLES_PER_UNIT: f64 = 100.0;

/// Trapezoidal quadrature of the speed `‖rhs‖` over the whole trajectory.
pub fn path_length<T: Real, F: KinematicFlow<T>>(
    flow: &F,
    trajectory: &FlowTrajectory<F::State, T>,
) -> Result<T, ComplexityError> {
    let end = trajectory.last().s;
    path_length_until(flow, trajectory, end)
}

/// Same as [`path_length`] restricted to `[0, s_end]`; the speed in the last
/// partial interval is interpolated linearly.
pub fn path_length_until<T: Real, F: KinematicFlow<T>>(
    flow: &F,
    trajectory: &FlowTrajectory<F::State, T>,
    s_end: T,
) -> Result<T, ComplexityError> {
    let speeds: Vec<(T, T)> = trajectory
        .samples
        .iter()
        .map(|smp| (smp.s, flow.speed(&smp.state)))
        .collect();
    trapezoid_until(&speeds, s_end)
}

/// Trapezoidal rule on `(s, f(s))` pairs, truncated at `s_end`.
pub fn trapezoid_until<T: Real>(points: &[(T, T)], s_end: T) -> Result<T, ComplexityError> {
    let max_spacing = T::lit(1.0 / MIN_SAMPLES_PER_UNIT * (1.0 + 1e-9));
    let mut total = T::zero();
    let half = T::lit(0.5);
    for w in points.windows(2) {
        let ((s0, f0), (s1, f1)) = (w[0], w[1]);
        if s0 >= s_end {
            break;
        }
        let ds = s1 - s0;
        if ds > max_spacing {
            return Err(ComplexityError::SparseSampling {
                required_per_unit: MIN_SAMPLES_PER_UNIT,
                spacing: ds.to_f64_lossy(),
            });
        }
        if s1 <= s_end {
            total = total + half * ds * (f0 + f1);
        } else {
            let part = s_end - s0;
            let f_end = f0 + (f1 - f0) * part / ds;
            total = total + half * part * (f0 + f_end);
        }
    }
    Ok(total)
}

/// Closed-form gate speed for `A = I`: `‖I − U'²‖_F = √(2(N − Re Tr U'²))`.
pub fn gate_speed_closed_form<T: Real>(u_prime: &Unitary<T>) -> T {
    let n = T::from_count(u_prime.dim());
    let tr = ComplexMatrix::trace_of_product(u_prime, u_prime).re;
    (T::lit(2.0) * (n - tr)).max(T::zero()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flows::{integrate, GateProblem, IntegratorOptions};
    use crate::scalar::C;

    #[test]
    fn trapezoid_is_exact_for_linear() {
        let pts: Vec<(f64, f64)> = (0..=200)
            .map(|i| (i as f64 * 0.005, 2.0 * i as f64 * 0.005))
            .collect();
        let l = trapezoid_until(&pts, 0.5).unwrap();
        assert!((l - 0.25).abs() < 1e-14);
        let sparse = [(0.0, 1.0), (0.5, 1.0)];
        assert!(matches!(
            trapezoid_until(&sparse, 0.5),
            Err(ComplexityError::SparseSampling { .. })
        ));
    }

    #[test]
    fn single_mode_arc_length() {
        // one mode from e^{iπ/2} towards 1 moves along the unit circle
        let w = crate::matcore::Unitary::from_phases(&[C::from_polar(
            1.0f64,
            -std::f64::consts::FRAC_PI_2,
        )])
        .unwrap();
        let g = GateProblem::from_target(w).unwrap();
        let tr = integrate(&g, 3.0, &IntegratorOptions::default()).unwrap();
        let l = path_length(&g, &tr).unwrap();
        let closed: Vec<(f64, f64)> = tr
            .samples
            .iter()
            .map(|s| (s.s, gate_speed_closed_form(&s.state)))
            .collect();
        let l2 = trapezoid_until(&closed, 3.0).unwrap();
        assert!((l - l2).abs() < 1e-10);
        // angle still remaining at s = 3
        let z = tr.last().state[(0, 0)];
        assert!((l - (std::f64::consts::FRAC_PI_2 - z.arg().abs())).abs() < 1e-4);
    }
}
