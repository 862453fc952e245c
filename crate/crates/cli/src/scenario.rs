// SPDX-License-Identifier: Apache-2.0

//! One instance of each scenario, addressed by `(N, seed)`.

use kinflow::complexity::{
    measure_gate_instance, run_instance as run_study_instance, HaltSpec, InstanceRecord, StudyKind,
};
use kinflow::dyncontrol::{
    gradient_ascent, propagate, AscentOptions, AscentTermination, ControlField, ControlSystem,
    Objective,
};
use kinflow::flows::{
    analytic_gate_rotated, analytic_x, integrate, GateProblem, ObservableProblem, SimplexPoint,
};
use kinflow::matcore::{
    gue_hermitian_with, haar_unitary_with, rng_from_seed, spectrum_uniform_with, ComplexMatrix,
    Hermitian, Unitary,
};
use kinflow::C;
use rand::Rng;

use crate::config::{ExperimentConfig, FlowKind, Scenario, TargetKind};

/// One CSV row; `None` marks a column that does not apply to the scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub scenario: Scenario,
    pub n: usize,
    pub seed: u64,
    pub t_measured: Option<f64>,
    pub bound_eps: Option<f64>,
    pub bound_region: Option<f64>,
    pub bound_total: Option<f64>,
    pub converged: Option<bool>,
    pub path_length: Option<f64>,
    pub path_bound: Option<f64>,
    pub invariant_max_residual: f64,
}

impl Row {
    fn empty(scenario: Scenario, n: usize, seed: u64) -> Self {
        Self {
            scenario,
            n,
            seed,
            t_measured: None,
            bound_eps: None,
            bound_region: None,
            bound_total: None,
            converged: None,
            path_length: None,
            path_bound: None,
            invariant_max_residual: f64::NAN,
        }
    }

    fn from_record(scenario: Scenario, r: &InstanceRecord<f64>) -> Self {
        Self {
            scenario,
            n: r.n,
            seed: r.seed,
            t_measured: Some(r.t_measured),
            bound_eps: Some(r.bound_eps),
            bound_region: r.bound_region,
            bound_total: Some(r.bound_total),
            converged: Some(r.converged),
            path_length: r.path_length,
            path_bound: r.path_bound,
            invariant_max_residual: r.invariant_max_residual,
        }
    }
}

/// Scenario-specific results that go to the summary but not the CSV.
#[derive(Clone, Debug, PartialEq)]
pub enum Detail {
    Analytic {
        observable_deviation: f64,
        gate_deviation: f64,
    },
    Study {
        resamples: usize,
        pathological: bool,
        time_violation: bool,
        path_violation: bool,
    },
    Control {
        iterations: usize,
        final_phi: f64,
        final_distance: f64,
        termination: String,
    },
    Error(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub row: Row,
    pub detail: Detail,
    /// Invariant failure or runtime error; the run exits with status 1.
    pub failure: Option<String>,
}

impl Outcome {
    pub fn bound_violation(&self) -> bool {
        matches!(
            self.detail,
            Detail::Study {
                time_violation: true,
                ..
            } | Detail::Study {
                path_violation: true,
                ..
            }
        )
    }
}

/// Runs `(scenario, N, seed)` under the tunables of `cfg`.
pub fn run_instance(cfg: &ExperimentConfig, n: usize, index: usize, seed: u64) -> Outcome {
    let result = match cfg.scenario {
        Scenario::AnalyticCheck => analytic_check(cfg, n, seed),
        Scenario::ConvergeObservable => study(cfg, StudyKind::Observable, n, index, seed),
        Scenario::ConvergeGate => converge_gate(cfg, n, index, seed),
        Scenario::ScalingStudy => {
            let kind = match cfg.study_kind {
                FlowKind::Observable => StudyKind::Observable,
                FlowKind::Gate => StudyKind::Gate,
            };
            study(cfg, kind, n, index, seed)
        }
        Scenario::PathLengthStudy => study(cfg, StudyKind::Gate, n, index, seed),
        Scenario::DyncontrolDemo => dyncontrol_demo(cfg, n, seed),
    };
    let mut outcome = result.unwrap_or_else(|e| Outcome {
        row: Row::empty(cfg.scenario, n, seed),
        detail: Detail::Error(e.to_string()),
        failure: Some(format!("runtime error: {e}")),
    });
    let r = outcome.row.invariant_max_residual;
    if outcome.failure.is_none() && !(r <= cfg.invariant_tolerance) {
        outcome.failure = Some(format!(
            "invariant residual {r:.3e} exceeds tolerance {:.3e}",
            cfg.invariant_tolerance
        ));
    }
    outcome
}

type Boxed = Box<dyn std::error::Error + Send + Sync>;

fn analytic_check(cfg: &ExperimentConfig, n: usize, seed: u64) -> Result<Outcome, Boxed> {
    let mut rng = rng_from_seed(seed);
    let spectrum = spectrum_uniform_with(&mut rng, n, -1.0, 1.0)?;
    let weights: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.05).collect();
    let obs = ObservableProblem::new(spectrum, SimplexPoint::from_weights(&weights)?)?;
    let gate = GateProblem::from_target(haar_unitary_with(&mut rng, n)?)?;
    let opts = cfg.integrator.options();

    let tr = integrate(&obs, cfg.s_max, &opts)?;
    let mut observable_deviation = 0.0f64;
    for smp in &tr.samples {
        let x = analytic_x(smp.s, &obs);
        for k in 0..n {
            observable_deviation = observable_deviation.max((smp.state[k] - x[k]).abs());
        }
    }
    let mut residual = tr.max_residual();

    let tg = integrate(&gate, cfg.s_max, &opts)?;
    let mut gate_deviation = 0.0f64;
    for smp in &tg.samples {
        let u = analytic_gate_rotated(smp.s, &gate)?;
        gate_deviation = gate_deviation.max((smp.state.matrix() - u.matrix()).frobenius_norm());
    }
    residual = residual.max(tg.max_residual());

    let mut row = Row::empty(Scenario::AnalyticCheck, n, seed);
    row.invariant_max_residual = residual;
    let worst = observable_deviation.max(gate_deviation);
    let failure = (!(worst <= cfg.analytic_tolerance)).then(|| {
        format!(
            "analytic deviation {worst:.3e} exceeds tolerance {:.3e}",
            cfg.analytic_tolerance
        )
    });
    Ok(Outcome {
        row,
        detail: Detail::Analytic {
            observable_deviation,
            gate_deviation,
        },
        failure,
    })
}

fn study_outcome(scenario: Scenario, r: &InstanceRecord<f64>, pathological: bool) -> Outcome {
    Outcome {
        row: Row::from_record(scenario, r),
        detail: Detail::Study {
            resamples: r.resamples,
            pathological,
            time_violation: r.violates_time_bound(),
            path_violation: r.violates_path_bound(),
        },
        failure: None,
    }
}

fn study(
    cfg: &ExperimentConfig,
    kind: StudyKind,
    n: usize,
    index: usize,
    seed: u64,
) -> Result<Outcome, Boxed> {
    let r = run_study_instance(&cfg.study(kind), n, index, seed)?;
    Ok(study_outcome(cfg.scenario, &r, false))
}

fn converge_gate(
    cfg: &ExperimentConfig,
    n: usize,
    index: usize,
    seed: u64,
) -> Result<Outcome, Boxed> {
    let study_cfg = cfg.study(StudyKind::Gate);
    let target = match cfg.target.kind {
        TargetKind::Haar => return study(cfg, StudyKind::Gate, n, index, seed),
        TargetKind::Antipodal => {
            let mut rng = rng_from_seed(seed);
            let v: Unitary<f64> = haar_unitary_with(&mut rng, n)?;
            let mut phases = vec![C::new(-1.0, 0.0)];
            phases.extend((1..n).map(|_| C::from_polar(1.0, rng.random_range(-3.0..3.0))));
            let d = ComplexMatrix::from_diag(&phases);
            Unitary::new(&(v.adjoint().matrix() * &d) * v.matrix())?
        }
        TargetKind::Phases => {
            let phases = cfg.target.phases.as_deref().unwrap_or_default();
            let p: Vec<C<f64>> = phases.iter().map(|&t| C::from_polar(1.0, -t)).collect();
            Unitary::from_phases(&p)?
        }
    };
    let problem = GateProblem::from_target(target)?;
    let r = measure_gate_instance(&study_cfg, &problem, index, seed)?;
    Ok(study_outcome(cfg.scenario, &r, problem.is_pathological()))
}

fn dyncontrol_demo(cfg: &ExperimentConfig, n: usize, seed: u64) -> Result<Outcome, Boxed> {
    let c = &cfg.control;
    let mut rng = rng_from_seed(seed);
    let h0: Hermitian<f64> = gue_hermitian_with(&mut rng, n)?;
    let mu = gue_hermitian_with(&mut rng, n)?;
    let system = ControlSystem::new(h0, mu, c.horizon, c.intervals)?;
    let target: Unitary<f64> = haar_unitary_with(&mut rng, n)?;
    let start = Hermitian::projector(&Unitary::<f64>::identity(n).matrix().column(0));
    let objective = Objective::observable(start, Hermitian::projector(&target.matrix().column(0)));
    let opts = AscentOptions {
        step: c.step,
        max_iters: c.max_iters,
        ..AscentOptions::default()
    };
    let halt = HaltSpec::new(cfg.epsilon_p, false)?;
    let history = gradient_ascent(
        &system,
        &ControlField::constant(c.intervals, c.initial_field),
        &objective,
        &halt,
        &opts,
    )?;
    let last = history
        .iterates
        .last()
        .ok_or("ascent produced no iterates")?;
    let u = propagate(&system, &history.field)?.u_final;
    let mut row = Row::empty(Scenario::DyncontrolDemo, n, seed);
    row.converged = Some(history.termination == AscentTermination::Precision);
    row.invariant_max_residual = u.matrix().unitarity_residual();
    Ok(Outcome {
        row,
        detail: Detail::Control {
            iterations: last.iteration,
            final_phi: last.phi,
            final_distance: last.distance,
            termination: format!("{:?}", history.termination),
        },
        failure: None,
    })
}
