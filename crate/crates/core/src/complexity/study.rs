// SPDX-License-Identifier: Apache-2.0

//! Dimension-scaling studies over seeded random instances.

use rand::Rng;
use rayon::prelude::*;

use crate::flows::{GateProblem, IntegratorOptions, ObservableProblem, SimplexPoint};
use crate::matcore::{haar_unitary_with, rng_from_seed, Spectrum, Unitary};
use crate::scalar::Real;

use super::bounds::{bound_path_length, HaltSpec};
use super::fit::{least_squares, LinearFit};
use super::measure::measure_tc;
use super::path::path_length_until;
use super::ComplexityError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StudyKind {
    /// Pure-state observable flow from the uniform start, unit gap.
    Observable,
    /// Gate flow from `U₀ = I` towards a Haar target.
    Gate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig<T> {
    pub kind: StudyKind,
    pub dims: Vec<usize>,
    pub instances_per_dim: usize,
    pub seed: u64,
    pub epsilon_p: T,
    pub s_max: T,
    /// Top-eigenvalue degeneracy `k` for observable instances.
    pub multiplicity: usize,
    /// Gate targets with `π − |θ₀| < theta_margin` are redrawn.
    pub theta_margin: T,
    pub options: IntegratorOptions<T>,
}

impl<T: Real> StudyConfig<T> {
    pub fn new(kind: StudyKind, dims: Vec<usize>, instances_per_dim: usize, seed: u64) -> Self {
        Self {
            kind,
            dims,
            instances_per_dim,
            seed,
            epsilon_p: T::lit(0.01),
            s_max: T::lit(50.0),
            multiplicity: 1,
            theta_margin: T::lit(0.1),
            options: IntegratorOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<(), ComplexityError> {
        let bad = |m: &str| Err(ComplexityError::InvalidStudy(m.to_string()));
        if self.dims.is_empty() {
            return bad("dims must be nonempty");
        }
        if self.instances_per_dim == 0 {
            return bad("instances_per_dim must be at least 1");
        }
        if self.dims.contains(&0) {
            return bad("every dimension must be at least 1");
        }
        if self.kind == StudyKind::Observable && self.dims.iter().any(|&n| n <= self.multiplicity) {
            return bad("observable dimensions must exceed the multiplicity");
        }
        if self.multiplicity == 0 {
            return bad("multiplicity must be at least 1");
        }
        if !(self.s_max > T::zero()) || !self.s_max.is_finite() {
            return bad("s_max must be positive and finite");
        }
        if !(self.theta_margin >= T::zero()) || self.theta_margin >= T::PI() {
            return bad("theta_margin must lie in [0, π)");
        }
        HaltSpec::new(self.epsilon_p, true)?;
        Ok(())
    }
}

/// Outcome of one instance; fields that do not apply are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceRecord<T> {
    pub n: usize,
    pub index: usize,
    pub seed: u64,
    /// Pathological draws discarded before this instance.
    pub resamples: usize,
    pub t_measured: T,
    pub bound_eps: T,
    pub bound_region: Option<T>,
    pub bound_total: T,
    pub converged: bool,
    pub path_length: Option<T>,
    pub path_bound: Option<T>,
    pub invariant_max_residual: T,
}

impl<T: Real> InstanceRecord<T> {
    pub fn violates_time_bound(&self) -> bool {
        self.converged && self.t_measured > self.bound_total
    }

    pub fn violates_path_bound(&self) -> bool {
        matches!((self.path_length, self.path_bound), (Some(l), Some(b)) if l > b)
    }
}

#[derive(Clone, Debug)]
pub struct ScalingStudy<T> {
    pub config: StudyConfig<T>,
    pub records: Vec<InstanceRecord<T>>,
    /// `t_measured` against `ln N` over converged instances.
    pub fit_tc: Option<LinearFit>,
    /// `ln L` against `ln N` (gate studies).
    pub fit_path: Option<LinearFit>,
    pub resampled: usize,
    pub time_bound_violations: usize,
    pub path_bound_violations: usize,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-instance seed derived from `(study seed, N, index)`.
pub fn instance_seed(study_seed: u64, n: usize, index: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(study_seed) ^ n as u64) ^ index as u64)
}

/// `λ_1 = … = λ_k = 1`, `λ_{k+1} = 0`, remaining values uniform on `[−1, 0]`,
/// so the gap is exactly one.
pub fn fixed_gap_spectrum<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
) -> Result<Spectrum<T>, ComplexityError> {
    if k == 0 || n <= k {
        return Err(ComplexityError::InvalidStudy(format!(
            "need N > k ≥ 1, got N = {n}, k = {k}"
        )));
    }
    let mut values = vec![T::one(); k];
    values.push(T::zero());
    values.extend((k + 1..n).map(|_| -T::lit(rng.random::<f64>())));
    Ok(Spectrum::diagonal(values)?)
}

/// Draws a Haar target whose slowest phase stays `margin` away from `π`;
/// returns the problem and the number of rejected draws.
pub fn draw_gate_problem<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    margin: T,
) -> Result<(GateProblem<T>, usize), ComplexityError> {
    let mut rejected = 0;
    loop {
        let w: Unitary<T> = haar_unitary_with(rng, n)?;
        let g = GateProblem::from_target(w)?;
        if T::PI() - g.theta0().abs() >= margin && !g.is_pathological() {
            return Ok((g, rejected));
        }
        rejected += 1;
    }
}

/// Runs the single instance `(N, seed)` of a study; this is all that is
/// needed to replay it.
pub fn run_instance<T: Real>(
    config: &StudyConfig<T>,
    n: usize,
    index: usize,
    seed: u64,
) -> Result<InstanceRecord<T>, ComplexityError> {
    let halt = HaltSpec::new(config.epsilon_p, true)?;
    let mut rng = rng_from_seed(seed);
    match config.kind {
        StudyKind::Observable => {
            let spectrum = fixed_gap_spectrum(&mut rng, n, config.multiplicity)?;
            let problem = ObservableProblem::new(spectrum, SimplexPoint::uniform(n))?;
            let r = measure_tc(&problem, &halt, config.s_max, &config.options)?;
            Ok(InstanceRecord {
                n,
                index,
                seed,
                resamples: 0,
                t_measured: r.t_measured,
                bound_eps: r.bound_tc_eps,
                bound_region: Some(r.bound_tc_region),
                bound_total: r.bound_tc_total,
                converged: r.converged,
                path_length: None,
                path_bound: None,
                invariant_max_residual: r.trajectory.max_residual(),
            })
        }
        StudyKind::Gate => {
            let (problem, resamples) = draw_gate_problem(&mut rng, n, config.theta_margin)?;
            let mut record = measure_gate_instance(config, &problem, index, seed)?;
            record.resamples = resamples;
            Ok(record)
        }
    }
}

/// Halting time, bounds and path length of one gate problem under the
/// study's halting rule and horizon.
pub fn measure_gate_instance<T: Real>(
    config: &StudyConfig<T>,
    problem: &GateProblem<T>,
    index: usize,
    seed: u64,
) -> Result<InstanceRecord<T>, ComplexityError> {
    let halt = HaltSpec::new(config.epsilon_p, true)?;
    let n = problem.dim();
    let r = measure_tc(problem, &halt, config.s_max, &config.options)?;
    let (path_length, path_bound) = if r.converged {
        let l = path_length_until(problem, &r.trajectory, r.t_measured)?;
        (
            Some(l),
            Some(bound_path_length(problem.theta0(), n, r.t_measured.tanh())),
        )
    } else {
        (None, None)
    };
    Ok(InstanceRecord {
        n,
        index,
        seed,
        resamples: 0,
        t_measured: r.t_measured,
        bound_eps: r.bound_tc_eps,
        bound_region: None,
        bound_total: r.bound_tc_total,
        converged: r.converged,
        path_length,
        path_bound,
        invariant_max_residual: r.trajectory.max_residual(),
    })
}

/// Fits `t_measured` and `ln L` against `ln N` over converged records.
pub fn fit_records<T: Real>(
    records: &[InstanceRecord<T>],
) -> (Option<LinearFit>, Option<LinearFit>) {
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let (mut px, mut py) = (Vec::new(), Vec::new());
    for r in records.iter().filter(|r| r.converged) {
        let ln_n = (r.n as f64).ln();
        xs.push(ln_n);
        ys.push(r.t_measured.to_f64_lossy());
        if let Some(l) = r.path_length {
            if l > T::zero() {
                px.push(ln_n);
                py.push(l.to_f64_lossy().ln());
            }
        }
    }
    (least_squares(&xs, &ys), least_squares(&px, &py))
}

/// Runs every `(N, index)` instance in parallel and fits the results.
pub fn run_scaling_study<T: Real>(
    config: &StudyConfig<T>,
) -> Result<ScalingStudy<T>, ComplexityError> {
    config.validate()?;
    let work: Vec<(usize, usize)> = config
        .dims
        .iter()
        .flat_map(|&n| (0..config.instances_per_dim).map(move |i| (n, i)))
        .collect();
    let records = work
        .par_iter()
        .map(|&(n, i)| run_instance(config, n, i, instance_seed(config.seed, n, i)))
        .collect::<Result<Vec<_>, _>>()?;
    let (fit_tc, fit_path) = fit_records(&records);
    Ok(ScalingStudy {
        fit_tc,
        fit_path,
        resampled: records.iter().map(|r| r.resamples).sum(),
        time_bound_violations: records.iter().filter(|r| r.violates_time_bound()).count(),
        path_bound_violations: records.iter().filter(|r| r.violates_path_bound()).count(),
        config: config.clone(),
        records,
    })
}
