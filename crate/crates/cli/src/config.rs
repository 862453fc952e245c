// SPDX-License-Identifier: Apache-2.0

//! Experiment configuration: a single JSON document.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use kinflow::complexity::{StudyConfig, StudyKind};
use kinflow::flows::IntegratorOptions;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    AnalyticCheck,
    ConvergeObservable,
    ConvergeGate,
    ScalingStudy,
    PathLengthStudy,
    DyncontrolDemo,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::AnalyticCheck,
        Scenario::ConvergeObservable,
        Scenario::ConvergeGate,
        Scenario::ScalingStudy,
        Scenario::PathLengthStudy,
        Scenario::DyncontrolDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::AnalyticCheck => "analytic_check",
            Scenario::ConvergeObservable => "converge_observable",
            Scenario::ConvergeGate => "converge_gate",
            Scenario::ScalingStudy => "scaling_study",
            Scenario::PathLengthStudy => "path_length_study",
            Scenario::DyncontrolDemo => "dyncontrol_demo",
        }
    }

    pub fn parse(name: &str) -> Option<Scenario> {
        Scenario::ALL.into_iter().find(|s| s.name() == name)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowKind {
    Observable,
    Gate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    /// Haar-random, redrawn while an eigenphase lies within `theta_margin` of π.
    Haar,
    /// Haar eigenbasis with one eigenphase exactly at π.
    Antipodal,
    /// `W = diag(e^{-iθ_j})` from `phases`.
    Phases,
}

/// Target family for `converge_gate`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateTarget {
    pub kind: TargetKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    #[serde(default = "IntegratorConfig::default_max_step")]
    pub max_step: f64,
    #[serde(default = "IntegratorConfig::default_step_scale")]
    pub step_scale: f64,
    #[serde(default = "IntegratorConfig::default_min_step")]
    pub min_step: f64,
}

impl IntegratorConfig {
    fn default_max_step() -> f64 {
        0.01
    }
    fn default_step_scale() -> f64 {
        0.1
    }
    fn default_min_step() -> f64 {
        1e-12
    }

    pub fn options(&self) -> IntegratorOptions<f64> {
        IntegratorOptions {
            max_step: self.max_step,
            step_scale: self.step_scale,
            min_step: self.min_step,
            record_every: 1,
        }
    }
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            max_step: Self::default_max_step(),
            step_scale: Self::default_step_scale(),
            min_step: Self::default_min_step(),
        }
    }
}

/// Settings of the field-space ascent in `dyncontrol_demo`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlConfig {
    #[serde(default = "ControlConfig::default_horizon")]
    pub horizon: f64,
    #[serde(default = "ControlConfig::default_intervals")]
    pub intervals: usize,
    #[serde(default = "ControlConfig::default_initial_field")]
    pub initial_field: f64,
    #[serde(default = "ControlConfig::default_step")]
    pub step: f64,
    #[serde(default = "ControlConfig::default_max_iters")]
    pub max_iters: usize,
}

impl ControlConfig {
    fn default_horizon() -> f64 {
        3.0
    }
    fn default_intervals() -> usize {
        32
    }
    fn default_initial_field() -> f64 {
        0.2
    }
    fn default_step() -> f64 {
        0.1
    }
    fn default_max_iters() -> usize {
        2000
    }
}

impl Default for ControlConfig {
    fn default() -> Self {
        Self {
            horizon: Self::default_horizon(),
            intervals: Self::default_intervals(),
            initial_field: Self::default_initial_field(),
            step: Self::default_step(),
            max_iters: Self::default_max_iters(),
        }
    }
}

fn default_dims() -> Vec<usize> {
    vec![2, 4, 8]
}
fn default_instances() -> usize {
    1
}
fn default_epsilon_p() -> f64 {
    0.01
}
fn default_s_max() -> f64 {
    50.0
}
fn default_multiplicity() -> usize {
    1
}
fn default_theta_margin() -> f64 {
    0.1
}
fn default_target() -> GateTarget {
    GateTarget {
        kind: TargetKind::Haar,
        phases: None,
    }
}
fn default_study_kind() -> FlowKind {
    FlowKind::Observable
}
fn default_invariant_tolerance() -> f64 {
    1e-8
}
fn default_analytic_tolerance() -> f64 {
    1e-6
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("kinflow-out")
}

/// Every tunable of a run. Missing fields take their defaults; unknown fields
/// are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    #[serde(default = "default_instances")]
    pub instances_per_dim: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_epsilon_p")]
    pub epsilon_p: f64,
    #[serde(default = "default_s_max")]
    pub s_max: f64,
    #[serde(default = "default_multiplicity")]
    pub multiplicity: usize,
    #[serde(default = "default_theta_margin")]
    pub theta_margin: f64,
    #[serde(default = "default_study_kind")]
    pub study_kind: FlowKind,
    #[serde(default = "default_target")]
    pub target: GateTarget,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub control: ControlConfig,
    #[serde(default = "default_invariant_tolerance")]
    pub invariant_tolerance: f64,
    #[serde(default = "default_analytic_tolerance")]
    pub analytic_tolerance: f64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

/// A rejected configuration, with its location when the JSON itself is bad.
#[derive(Debug)]
pub struct ConfigError {
    pub location: Option<(usize, usize)>,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((line, column)) = self.location {
            write!(f, "line {line}, column {column}: ")?;
        }
        if let Some(field) = &self.field {
            write!(f, "field `{field}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

fn field_error(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        location: None,
        field: Some(field.to_string()),
        message: message.into(),
    }
}

impl ExperimentConfig {
    /// Defaults for `scenario`; used by `replay` when no config is given.
    pub fn defaults(scenario: Scenario) -> Self {
        serde_json::from_value(serde_json::json!({ "scenario": scenario.name() }))
            .expect("defaults deserialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| ConfigError {
            location: Some((e.line(), e.column())),
            field: None,
            message: e.to_string(),
        })?;
        // Point range errors at the line where the field appears.
        cfg.validate().map_err(|mut e| {
            if let Some(field) = &e.field {
                let key = format!("\"{}\"", field.split(['.', '[']).next().unwrap_or(field));
                if let Some(line) = text.lines().position(|l| l.contains(&key)) {
                    e.location = Some((line + 1, 1));
                }
            }
            e
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError {
            location: None,
            field: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::from_json(&text)
    }

    /// Range checks on every numeric field, plus writability of `output_dir`.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(field_error(
                    name,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        };
        if self.dims.is_empty() {
            return Err(field_error("dims", "must list at least one dimension"));
        }
        if let Some(&n) = self.dims.iter().find(|&&n| !(1..=64).contains(&n)) {
            return Err(field_error(
                "dims",
                format!("every dimension must lie in 1..=64, got {n}"),
            ));
        }
        if !(1..=10_000).contains(&self.instances_per_dim) {
            return Err(field_error("instances_per_dim", "must lie in 1..=10000"));
        }
        if !(self.epsilon_p > 0.0 && self.epsilon_p < 1.0) {
            return Err(field_error(
                "epsilon_p",
                format!("must lie in (0, 1), got {}", self.epsilon_p),
            ));
        }
        positive("s_max", self.s_max)?;
        if self.multiplicity == 0 {
            return Err(field_error("multiplicity", "must be at least 1"));
        }
        if !(0.0..std::f64::consts::PI).contains(&self.theta_margin) {
            return Err(field_error("theta_margin", "must lie in [0, π)"));
        }
        positive("integrator.max_step", self.integrator.max_step)?;
        positive("integrator.step_scale", self.integrator.step_scale)?;
        positive("integrator.min_step", self.integrator.min_step)?;
        if self.integrator.min_step > self.integrator.max_step {
            return Err(field_error(
                "integrator.min_step",
                "must not exceed integrator.max_step",
            ));
        }
        positive("invariant_tolerance", self.invariant_tolerance)?;
        positive("analytic_tolerance", self.analytic_tolerance)?;
        match self.scenario {
            Scenario::ConvergeObservable | Scenario::ScalingStudy
                if self.dims.iter().any(|&n| n <= self.multiplicity) =>
            {
                return Err(field_error(
                    "dims",
                    "observable dimensions must exceed `multiplicity`",
                ));
            }
            Scenario::ConvergeGate => match (self.target.kind, &self.target.phases) {
                (TargetKind::Phases, None) => {
                    return Err(field_error(
                        "target.phases",
                        "required when target.kind is \"phases\"",
                    ));
                }
                (TargetKind::Phases, Some(phases)) => {
                    if phases.iter().any(|p| !p.is_finite()) {
                        return Err(field_error("target.phases", "must be finite"));
                    }
                    if self.dims.iter().any(|&n| n != phases.len()) {
                        return Err(field_error(
                            "dims",
                            "must all equal the number of target phases",
                        ));
                    }
                }
                (_, Some(_)) => {
                    return Err(field_error(
                        "target.phases",
                        "only allowed with target.kind \"phases\"",
                    ))
                }
                _ => {}
            },
            Scenario::DyncontrolDemo => {
                let c = &self.control;
                positive("control.horizon", c.horizon)?;
                positive("control.step", c.step)?;
                if !c.initial_field.is_finite() {
                    return Err(field_error("control.initial_field", "must be finite"));
                }
                if !(2..=4096).contains(&c.intervals) {
                    return Err(field_error("control.intervals", "must lie in 2..=4096"));
                }
                if c.max_iters == 0 {
                    return Err(field_error("control.max_iters", "must be at least 1"));
                }
                if self.dims.iter().any(|&n| n > 8) {
                    return Err(field_error(
                        "dims",
                        "dyncontrol_demo supports dimensions up to 8",
                    ));
                }
            }
            _ => {}
        }
        check_writable(&self.output_dir)
    }

    pub fn study(&self, kind: StudyKind) -> StudyConfig<f64> {
        let mut s = StudyConfig::new(kind, self.dims.clone(), self.instances_per_dim, self.seed);
        s.epsilon_p = self.epsilon_p;
        s.s_max = self.s_max;
        s.multiplicity = self.multiplicity;
        s.theta_margin = self.theta_margin;
        s.options = self.integrator.options();
        s
    }
}

/// An existing directory must accept a probe file; a missing one needs an
/// existing ancestor directory.
fn check_writable(dir: &Path) -> Result<(), ConfigError> {
    let err = |m: String| field_error("output_dir", m);
    if dir.exists() {
        if !dir.is_dir() {
            return Err(err(format!("{} is not a directory", dir.display())));
        }
        let probe = dir.join(".kinflow-probe");
        fs::write(&probe, b"")
            .map_err(|e| err(format!("{} is not writable: {e}", dir.display())))?;
        let _ = fs::remove_file(probe);
        return Ok(());
    }
    let mut ancestor = dir.parent();
    while let Some(a) = ancestor {
        if a.as_os_str().is_empty() || a.is_dir() {
            let a = if a.as_os_str().is_empty() {
                Path::new(".")
            } else {
                a
            };
            if fs::metadata(a)
                .map(|m| m.permissions().readonly())
                .unwrap_or(true)
            {
                return Err(err(format!(
                    "cannot create {} under {}",
                    dir.display(),
                    a.display()
                )));
            }
            return Ok(());
        }
        if a.exists() {
            return Err(err(format!("{} is not a directory", a.display())));
        }
        ancestor = a.parent();
    }
    Ok(())
}
