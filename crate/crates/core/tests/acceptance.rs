// SPDX-License-Identifier: Apache-2.0

//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use kinflow::complexity::{
    bound_tc_gate, draw_gate_problem, measure_tc, run_scaling_study, HaltSpec, StudyConfig,
    StudyKind,
};
use kinflow::dyncontrol::{check_chain_rule, ControlField, ControlSystem, Objective};
use kinflow::flows::{
    analytic_gate_rotated, analytic_log_x, analytic_x, integrate, GateProblem, IntegratorOptions,
    KinematicFlow, MixedStateProblem, ObservableProblem, SimplexPoint,
};
use kinflow::matcore::{eigh, haar_unitary_with, rng_from_seed, Hermitian, Unitary};
use rand::Rng;
use rayon::prelude::*;

use common::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn base_seed(criterion: u64) -> u64 {
    0x5EED_0000 + criterion * 10_000
}

/// Integrated vs closed-form trajectories.
fn oracle_equivalence() -> Outcome {
    let opts = IntegratorOptions::default();
    let obs: Vec<f64> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(base_seed(1) + i);
            let n = 2 + (i as usize % 15);
            let base = nondegenerate_spectrum(&mut rng, n, 0.0);
            let s = rotated(&mut rng, &base);
            let p = ObservableProblem::new(s, random_simplex(&mut rng, n)).unwrap();
            let tr = integrate(&p, 10.0, &opts).unwrap();
            tr.samples
                .iter()
                .map(|smp| {
                    let x = analytic_x(smp.s, &p);
                    (0..n)
                        .map(|k| (smp.state[k] - x[k]).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let gate: Vec<f64> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(base_seed(1) + 500 + i);
            let n = 2 + (i as usize % 15);
            let g = GateProblem::from_target(haar_unitary_with(&mut rng, n).unwrap()).unwrap();
            let tr = integrate(&g, 10.0, &opts).unwrap();
            tr.samples
                .iter()
                .map(|smp| {
                    let u = analytic_gate_rotated(smp.s, &g).unwrap();
                    (smp.state.matrix() - u.matrix()).frobenius_norm()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let mo = obs.iter().copied().fold(0.0, f64::max);
    let mg = gate.iter().copied().fold(0.0, f64::max);
    outcome(
        mo <= 1e-8 && mg <= 1e-6,
        format!("observable sup {mo:.3e} (<= 1e-8), gate sup {mg:.3e} (<= 1e-6)"),
    )
}

/// Measured observable halting time never exceeds max(eps bound, region bound).
fn observable_bound_soundness() -> Outcome {
    let run = |i: u64, degenerate: bool| -> (bool, f64) {
        let mut rng = rng_from_seed(base_seed(2) + i + if degenerate { 5000 } else { 0 });
        let (n, s) = if degenerate {
            let k = 2 + (i as usize % 2);
            let n = k + 1 + (i as usize % (64 - k));
            (n, degenerate_spectrum(&mut rng, n, k, 0.05))
        } else {
            let n = 2 + (i as usize % 63);
            (n, nondegenerate_spectrum(&mut rng, n, 0.05))
        };
        let p = ObservableProblem::new(s, SimplexPoint::uniform(n)).unwrap();
        let halt = HaltSpec::new(0.01, true).unwrap();
        let s_max = 1.5
            * kinflow::complexity::observable_bounds(p.spectrum(), p.multiplicity(), p.x0(), 0.01)
                .total
            + 10.0;
        let r = measure_tc(&p, &halt, s_max, &IntegratorOptions::default()).unwrap();
        let ok = r.converged && r.t_measured <= r.bound_tc_total;
        (ok, r.t_measured / r.bound_tc_total)
    };
    let plain: Vec<(bool, f64)> = (0..1000u64)
        .into_par_iter()
        .map(|i| run(i, false))
        .collect();
    let degen: Vec<(bool, f64)> = (0..1000u64).into_par_iter().map(|i| run(i, true)).collect();
    let v1 = plain.iter().filter(|r| !r.0).count();
    let v2 = degen.iter().filter(|r| !r.0).count();
    let worst = plain.iter().chain(&degen).map(|r| r.1).fold(0.0, f64::max);
    outcome(
        v1 == 0 && v2 == 0,
        format!(
            "violations: {v1}/1000 nondegenerate, {v2}/1000 degenerate; max t/bound {worst:.4}"
        ),
    )
}

/// Measured gate halting time vs ln((1+x)/(1-x)); also collects monotonicity.
fn gate_bound_soundness() -> (Outcome, usize) {
    let dims = [2usize, 3, 4, 5, 6, 8];
    let results: Vec<(bool, f64, bool)> = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(base_seed(3) + i);
            let n = dims[i as usize % dims.len()];
            let (g, _) = draw_gate_problem(&mut rng, n, 0.1).unwrap();
            let halt = HaltSpec::new(0.1, true).unwrap();
            let b = bound_tc_gate(g.theta0(), halt.gate_epsilon(), n).unwrap();
            let r = measure_tc(&g, &halt, b.t_bound + 5.0, &IntegratorOptions::default()).unwrap();
            let monotone = r
                .trajectory
                .samples
                .windows(2)
                .all(|w| w[1].distance <= w[0].distance + 1e-10);
            (
                r.converged && r.t_measured <= b.t_bound,
                r.t_measured / b.t_bound,
                monotone,
            )
        })
        .collect();
    let v = results.iter().filter(|r| !r.0).count();
    let worst = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let non_monotone = results.iter().filter(|r| !r.2).count();
    (
        outcome(
            v == 0,
            format!("violations: {v}/1000; max t/bound {worst:.4}"),
        ),
        non_monotone,
    )
}

/// Fit of measured t_c against ln N for unit-gap spectra.
fn clog_scaling() -> Outcome {
    let mut cfg = StudyConfig::<f64>::new(
        StudyKind::Observable,
        vec![2, 4, 8, 16, 32, 64],
        20,
        base_seed(4),
    );
    cfg.epsilon_p = 0.01;
    let study = run_scaling_study(&cfg).unwrap();
    let fit = study.fit_tc.unwrap();
    let converged = study.records.iter().filter(|r| r.converged).count();
    let limit = 0.5 * 1.25;
    outcome(
        fit.r_squared >= 0.9 && fit.slope > 0.0 && fit.slope <= limit && converged == study.records.len(),
        format!(
            "slope {:.4} (<= {limit}), R^2 {:.4} (>= 0.9), converged {converged}/{}, bound violations {}",
            fit.slope,
            fit.r_squared,
            study.records.len(),
            study.time_bound_violations
        ),
    )
}

/// Decay rate of 1 - x_1(s) is 2 mu.
fn convergence_rate() -> Outcome {
    let rel: Vec<f64> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(base_seed(5) + i);
            let n = 2 + (i as usize % 7);
            let p = ObservableProblem::uniform(nondegenerate_spectrum(&mut rng, n, 0.05));
            let mu = p.gap();
            let start = 50.0 / mu;
            let (xs, ys): (Vec<f64>, Vec<f64>) = (0..=100)
                .map(|j| {
                    let s = start * (1.0 + j as f64 / 100.0);
                    let lx = analytic_log_x(s, &p);
                    let m = lx[1..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    let tail = m + lx[1..].iter().map(|v| (v - m).exp()).sum::<f64>().ln();
                    (s, tail)
                })
                .unzip();
            let fit = kinflow::complexity::least_squares(&xs, &ys).unwrap();
            (-fit.slope / (2.0 * mu) - 1.0).abs()
        })
        .collect();
    let worst = rel.iter().copied().fold(0.0, f64::max);
    outcome(
        worst <= 0.05,
        format!("max |rate/(2 mu) - 1| = {worst:.3e} over 100 instances (<= 0.05)"),
    )
}

/// Antipodal targets never halt and keep distance at least 2.
fn gate_pathology(non_monotone: usize) -> Outcome {
    let results: Vec<(bool, f64)> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(base_seed(6) + i);
            let n = 2 + (i as usize % 7);
            let g = GateProblem::from_target(antipodal_target(&mut rng, n)).unwrap();
            let r = measure_tc(
                &g,
                &HaltSpec::new(0.1, true).unwrap(),
                10.0,
                &IntegratorOptions::default(),
            )
            .unwrap();
            let min = r
                .trajectory
                .samples
                .iter()
                .map(|s| s.distance)
                .fold(f64::INFINITY, f64::min);
            (!r.converged && g.is_pathological(), min)
        })
        .collect();
    let flagged = results.iter().filter(|r| r.0).count();
    let min = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    outcome(
        flagged == 100 && min >= 2.0 - 1e-12 && non_monotone == 0,
        format!(
            "non-convergent {flagged}/100, min distance {min:.15} (>= 2 - 1e-12), non-monotone gate flows {non_monotone}"
        ),
    )
}

/// Path length against its bound, and the fitted exponent in N.
fn path_length_bound() -> Outcome {
    let mut cfg = StudyConfig::<f64>::new(StudyKind::Gate, vec![2, 4, 8, 16, 32], 10, base_seed(7));
    cfg.epsilon_p = 0.1;
    let study = run_scaling_study(&cfg).unwrap();
    let fit = study.fit_path.unwrap();
    let with_path = study
        .records
        .iter()
        .filter(|r| r.path_length.is_some())
        .count();
    outcome(
        study.path_bound_violations == 0
            && (0.5..=1.0).contains(&fit.slope)
            && with_path == study.records.len(),
        format!(
            "violations {}/{}; exponent {:.4} (in [0.5, 1.0]), R^2 {:.4}; resampled {}",
            study.path_bound_violations,
            study.records.len(),
            fit.slope,
            fit.r_squared,
            study.resampled
        ),
    )
}

/// Field gradients against finite differences, and first-order chain rule.
fn dynamic_gradients() -> Outcome {
    let results: Vec<(f64, f64, f64, f64)> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(base_seed(8) + i);
            let n = 2 + (i as usize % 2);
            let m = if i % 4 < 2 { 16 } else { 64 };
            let sys = ControlSystem::new(
                random_hermitian(&mut rng, n),
                random_hermitian(&mut rng, n),
                2.0,
                m,
            )
            .unwrap();
            let field =
                ControlField::new((0..m).map(|_| rng.random_range(-0.5..0.5)).collect()).unwrap();
            let psi = haar_unitary_with::<f64, _>(&mut rng, n)
                .unwrap()
                .matrix()
                .column(0);
            let o1 =
                Objective::observable(Hermitian::projector(&psi), random_hermitian(&mut rng, n));
            let o2 = Objective::gate(
                haar_unitary_with(&mut rng, n).unwrap(),
                random_hermitian(&mut rng, n),
            );
            let e1 = rel_inf(
                o1.field_gradient(&sys, &field).unwrap().values(),
                &fd_gradient(&sys, &field, &o1, 1e-5),
            );
            let e2 = rel_inf(
                o2.field_gradient(&sys, &field).unwrap().values(),
                &fd_gradient(&sys, &field, &o2, 1e-5),
            );
            let ratio = |o: &Objective<f64>| {
                let r1 = check_chain_rule(&sys, &field, o, 1e-4)
                    .unwrap()
                    .residual
                    .unwrap();
                let r2 = check_chain_rule(&sys, &field, o, 5e-5)
                    .unwrap()
                    .residual
                    .unwrap();
                r2 / r1
            };
            (e1, e2, ratio(&o1), ratio(&o2))
        })
        .collect();
    let e1 = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let e2 = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let ratios: Vec<f64> = results.iter().flat_map(|r| [r.2, r.3]).collect();
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    outcome(
        e1 <= 1e-5 && e2 <= 1e-5 && lo >= 0.4 && hi <= 0.6,
        format!("FD rel error phi1 {e1:.2e}, phi2 {e2:.2e} (<= 1e-5); chain-rule halving ratio in [{lo:.4}, {hi:.4}]"),
    )
}

/// Double-bracket flow keeps the spectrum of rho and ascends.
fn isospectrality() -> Outcome {
    let results: Vec<(f64, bool)> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(base_seed(9) + i);
            let n = 2 + (i as usize % 7);
            let p =
                MixedStateProblem::new(random_density(&mut rng, n), random_hermitian(&mut rng, n))
                    .unwrap();
            let reference = eigh(p.rho0()).values().to_vec();
            let tr = integrate(&p, 5.0, &IntegratorOptions::default()).unwrap();
            let drift = tr
                .samples
                .iter()
                .map(|smp| {
                    let rho = p.evolve(&smp.state);
                    eigh(&rho)
                        .values()
                        .iter()
                        .zip(&reference)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            let ascent = tr
                .samples
                .windows(2)
                .all(|w| w[1].objective >= w[0].objective - 1e-10);
            (
                drift,
                ascent && (p.objective(&tr.last().state) <= p.optimum() + 1e-10),
            )
        })
        .collect();
    let drift = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let ascent = results.iter().filter(|r| r.1).count();
    outcome(
        drift <= 1e-8 && ascent == 50,
        format!("max spectrum drift {drift:.3e} (<= 1e-8), non-decreasing {ascent}/50"),
    )
}

fn main() -> ExitCode {
    let mut lines = Vec::new();
    let mut all = true;
    let mut report = |id: u32, name: &str, t: Instant, o: Outcome| {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        all &= o.pass;
        let line = format!(
            "criterion {id} [{tag}] {name}: {} ({:.1}s)",
            o.detail,
            t.elapsed().as_secs_f64()
        );
        println!("{line}");
        lines.push(line);
    };
    let t = Instant::now();
    report(1, "analytic/numeric equivalence", t, oracle_equivalence());
    let t = Instant::now();
    report(
        2,
        "observable bound soundness",
        t,
        observable_bound_soundness(),
    );
    let t = Instant::now();
    let (o3, non_monotone) = gate_bound_soundness();
    report(3, "gate bound soundness", t, o3);
    let t = Instant::now();
    report(4, "logarithmic scaling of t_c", t, clog_scaling());
    let t = Instant::now();
    report(5, "convergence rate 2 mu", t, convergence_rate());
    let t = Instant::now();
    report(
        6,
        "gate monotonicity and pathology",
        t,
        gate_pathology(non_monotone),
    );
    let t = Instant::now();
    report(7, "path-length bound and exponent", t, path_length_bound());
    let t = Instant::now();
    report(8, "dynamic-layer gradients", t, dynamic_gradients());
    let t = Instant::now();
    report(9, "isospectral double-bracket flow", t, isospectrality());
    let _ = Unitary::<f64>::identity(1);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
