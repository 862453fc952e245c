// SPDX-License-Identifier: Apache-2.0

//! Closed-form upper bounds on the convergence time and path length.

use crate::flows::SimplexPoint;
use crate::matcore::Spectrum;
use crate::scalar::Real;

use super::ComplexityError;

/// Halting rule: stop inside the `epsilon_p` ball around the optimum,
/// optionally only once inside the attracting region as well.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HaltSpec<T> {
    pub epsilon_p: T,
    pub require_region: bool,
}

impl<T: Real> HaltSpec<T> {
    pub fn new(epsilon_p: T, require_region: bool) -> Result<Self, ComplexityError> {
        if !(epsilon_p > T::zero()) || !epsilon_p.is_finite() {
            return Err(ComplexityError::InvalidPrecision {
                epsilon_p: epsilon_p.to_f64_lossy(),
            });
        }
        Ok(Self {
            epsilon_p,
            require_region,
        })
    }

    /// Squared-Frobenius threshold `ε = ε_p²` used by the gate bound.
    pub fn gate_epsilon(&self) -> T {
        self.epsilon_p * self.epsilon_p
    }
}

/// The pair of observable bounds and their maximum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundSet<T> {
    pub eps: T,
    pub region: T,
    pub total: T,
}

impl<T: Real> BoundSet<T> {
    pub fn new(eps: T, region: T) -> Self {
        Self {
            eps,
            region,
            total: eps.max(region),
        }
    }
}

/// `N_eff = k / Σ_{i≤k} x_i(0)`; equals `N` for the uniform start.
fn effective_dim<T: Real>(k: usize, x0: &SimplexPoint<T>) -> T {
    let top: T = x0.as_slice()[..k].iter().copied().sum();
    T::from_count(k) / top
}

/// `(1/2μ) ln(2 N_eff k / ε²)` with `μ = λ_(1) − λ_{k+1}`, clamped at zero.
/// `+∞` when `μ ≤ 0` or the start has no weight on the top eigenspace.
pub fn bound_tc_eps_observable<T: Real>(
    spectrum: &Spectrum<T>,
    k: usize,
    x0: &SimplexPoint<T>,
    eps: T,
) -> T {
    let lambda = spectrum.values();
    if k >= lambda.len() {
        return T::zero();
    }
    let mu = lambda[0] - lambda[k];
    let n_eff = effective_dim(k, x0);
    if !(mu > T::zero()) || !n_eff.is_finite() {
        return T::infinity();
    }
    let two = T::lit(2.0);
    let arg = two * n_eff * T::from_count(k) / (eps * eps);
    (arg.ln() / (two * mu)).max(T::zero())
}

/// `max(0, (1/μ) ln[(N−k−2) λ_{k+1} x_{k+1}(0) / Σ_{i≤k}(λ_(1) x_i(0) − λ_{k+1} x_{k+1}(0))])`.
///
/// Zero whenever the logarithm's argument is at most one, including
/// `N ≤ k + 2` and nonpositive `λ_{k+1}`; `+∞` if the denominator vanishes.
pub fn bound_tc_region_observable<T: Real>(
    spectrum: &Spectrum<T>,
    k: usize,
    x0: &SimplexPoint<T>,
) -> T {
    let lambda = spectrum.values();
    let n = lambda.len();
    if n < k + 3 {
        return T::zero();
    }
    let mu = lambda[0] - lambda[k];
    if !(mu > T::zero()) {
        return T::infinity();
    }
    let l1 = lambda[0];
    let lk1 = lambda[k];
    let xk1 = x0[k];
    let num = T::from_count(n - k - 2) * lk1 * xk1;
    let den: T = (0..k).map(|i| l1 * x0[i] - lk1 * xk1).sum();
    if num <= T::zero() {
        return T::zero();
    }
    if !(den > T::zero()) {
        return T::infinity();
    }
    let arg = num / den;
    if arg <= T::one() {
        T::zero()
    } else {
        arg.ln() / mu
    }
}

pub fn observable_bounds<T: Real>(
    spectrum: &Spectrum<T>,
    k: usize,
    x0: &SimplexPoint<T>,
    eps: T,
) -> BoundSet<T> {
    BoundSet::new(
        bound_tc_eps_observable(spectrum, k, x0, eps),
        bound_tc_region_observable(spectrum, k, x0),
    )
}

/// Gate convergence-time bound for the slowest mode `θ₀` under the squared
/// threshold `‖U' − I‖_F² ≤ ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateBoundReport<T> {
    pub theta0: T,
    /// `|sin θ₀| / (1 − cos θ₀)`.
    pub a: T,
    /// `1 − x_{c,−}`.
    pub delta: T,
    /// Smaller root of the halting quadratic in `x = tanh s`.
    pub x_c_minus: T,
    /// `ln((1 + x)/(1 − x))`.
    pub t_bound: T,
    /// `artanh x`, the halting time of an `N`-fold `θ₀` mode.
    pub t_tight: T,
    /// `½ ln(4N / (a² ε))`.
    pub t_approx: T,
    /// False when `θ₀ = π`.
    pub convergent: bool,
}

/// Solves `(2N(1−c) − ε)x² − (4N(1−c) + 2εc)x + (2N(1−c) − ε) = 0`, `c = cos θ₀`,
/// whose roots are reciprocal; the smaller one is taken in cancellation-free form.
pub fn bound_tc_gate<T: Real>(
    theta0: T,
    eps: T,
    n: usize,
) -> Result<GateBoundReport<T>, ComplexityError> {
    if !(eps > T::zero()) || !eps.is_finite() {
        return Err(ComplexityError::InvalidPrecision {
            epsilon_p: eps.to_f64_lossy(),
        });
    }
    if n == 0 {
        return Err(ComplexityError::EmptyDimension);
    }
    let theta = theta0.abs();
    let one = T::one();
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let nn = T::from_count(n);
    if theta >= T::PI() {
        return Ok(GateBoundReport {
            theta0,
            a: T::zero(),
            delta: one,
            x_c_minus: T::zero(),
            t_bound: T::infinity(),
            t_tight: T::infinity(),
            t_approx: T::infinity(),
            convergent: false,
        });
    }
    if theta == T::zero() {
        return Ok(GateBoundReport {
            theta0,
            a: T::infinity(),
            delta: T::zero(),
            x_c_minus: one,
            t_bound: T::zero(),
            t_tight: T::zero(),
            t_approx: T::zero(),
            convergent: true,
        });
    }
    let c = theta.cos();
    let sin = theta.sin();
    // 1 − cos θ = 2 sin²(θ/2) avoids cancellation for small θ
    let one_minus_c = two * (theta / two).sin().powi(2);
    let a = sin / one_minus_c;
    let t_approx = (half_ln(four * nn / (a * a * eps))).max(T::zero());
    let a2 = two * nn * one_minus_c - eps;
    if a2 <= T::zero() {
        // already inside the ball at s = 0
        return Ok(GateBoundReport {
            theta0,
            a,
            delta: one,
            x_c_minus: T::zero(),
            t_bound: T::zero(),
            t_tight: T::zero(),
            t_approx,
            convergent: true,
        });
    }
    let b = four * nn * one_minus_c + two * eps * c;
    let disc = four * eps * sin * sin * (four * nn - eps);
    let x = (two * a2 / (b + disc.sqrt())).min(one);
    let delta = one - x;
    let t_bound = ((one + x) / delta).ln();
    let t_tight = x.atanh();
    Ok(GateBoundReport {
        theta0,
        a,
        delta,
        x_c_minus: x,
        t_bound,
        t_tight,
        t_approx,
        convergent: true,
    })
}

fn half_ln<T: Real>(v: T) -> T {
    v.ln() / T::lit(2.0)
}

/// `π √(2N) |sin θ₀| / √(1 − x_c)`; `+∞` at `x_c = 1`.
pub fn bound_path_length<T: Real>(theta0: T, n: usize, x_c: T) -> T {
    let s = theta0.sin().abs();
    if s == T::zero() {
        return T::zero();
    }
    let gap = T::one() - x_c;
    if !(gap > T::zero()) {
        return T::infinity();
    }
    T::PI() * (T::lit(2.0) * T::from_count(n)).sqrt() * s / gap.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(v: Vec<f64>) -> Spectrum<f64> {
        Spectrum::diagonal(v).unwrap()
    }

    #[test]
    fn eps_bound_values() {
        let s = spec(vec![1.0, 0.0]);
        let b = bound_tc_eps_observable(&s, 1, &SimplexPoint::uniform(2), 0.1);
        assert!((b - 0.5 * 400f64.ln()).abs() < 1e-12);
        let s = spec(vec![1.0, 1.0, 0.5, 0.2]);
        let b = bound_tc_eps_observable(&s, 2, &SimplexPoint::uniform(4), 0.1);
        assert!((b - 1600f64.ln()).abs() < 1e-12);
        let s = spec(vec![1.0, 1.0]);
        assert_eq!(
            bound_tc_eps_observable(&s, 1, &SimplexPoint::uniform(2), 0.1),
            f64::INFINITY
        );
    }

    #[test]
    fn region_bound_values() {
        let mut l = vec![0.5; 8];
        l[0] = 1.0;
        let b = bound_tc_region_observable(&spec(l), 1, &SimplexPoint::uniform(8));
        assert!((b - 2.0 * 5f64.ln()).abs() < 1e-12);
        // small N and negative λ_{k+1} clamp to zero
        assert_eq!(
            bound_tc_region_observable(&spec(vec![1.0, 0.5, 0.2]), 1, &SimplexPoint::uniform(3)),
            0.0
        );
        assert_eq!(
            bound_tc_region_observable(
                &spec(vec![1.0, -0.5, -0.6, -0.7]),
                1,
                &SimplexPoint::uniform(4)
            ),
            0.0
        );
    }

    #[test]
    fn gate_bound_values() {
        let r = bound_tc_gate(std::f64::consts::FRAC_PI_2, 0.01, 4).unwrap();
        assert!((r.a - 1.0).abs() < 1e-15);
        assert!((r.t_approx - 0.5 * 1600f64.ln()).abs() < 1e-12);
        assert!((r.delta - (1.0 - r.x_c_minus)).abs() < 1e-16);
        // the root satisfies the quadratic
        let (n, e, c) = (4.0, 0.01, 0.0f64);
        let x = r.x_c_minus;
        let q = (2.0 * n * (1.0 - c) - e) * x * x - (4.0 * n * (1.0 - c) + 2.0 * e * c) * x
            + (2.0 * n * (1.0 - c) - e);
        assert!(q.abs() < 1e-12);
        assert!((r.t_bound - 2.0 * r.t_tight).abs() < 1e-12);

        let p = bound_tc_gate(std::f64::consts::PI, 0.01, 4).unwrap();
        assert!(!p.convergent);
        assert_eq!(bound_tc_gate(0.0, 0.01, 4).unwrap().t_bound, 0.0);
    }

    #[test]
    fn path_bound_values() {
        let b = bound_path_length(std::f64::consts::FRAC_PI_2, 2, 0.0);
        assert!((b - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(bound_path_length(0.0, 5, 0.3), 0.0);
        assert_eq!(bound_path_length(1.0, 5, 1.0), f64::INFINITY);
    }
}
