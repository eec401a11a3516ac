//! Scenario and sweep files.
//!
//! Configurations are TOML: flat sections, comments allowed, unknown keys
//! rejected. A scenario file describes one run; a sweep file carries a
//! `[sweep]` section with a base scenario plus a value grid and the laws to
//! compare.

use std::path::Path;

use serde::{Deserialize, Serialize};
use tether_guide::control::{GuidanceConfig, GuidanceLaw};
use tether_guide::linalg::{Mat3, Vec3};
use tether_guide::model::{AdmittanceParams, CableParams, HumanParams, ModelParams};
use tether_guide::sim::{
    initial_state, DeltaProfile, GaitConfig, SimConfig, StartMode, VelocitySource,
};
use tether_guide::trajectory::LyapunovMode;
use tether_guide::{DEFAULT_HANDLE_HEIGHT, GRAVITY};

use crate::error::CliError;

/// A 3x3 parameter matrix: either an isotropic scalar or full rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Scalar(f64),
    Rows([[f64; 3]; 3]),
}

impl MatrixSpec {
    pub fn to_mat3(&self) -> Mat3 {
        match self {
            MatrixSpec::Scalar(s) => Mat3::identity() * *s,
            MatrixSpec::Rows(rows) => {
                Mat3::from_row_slice(&rows.iter().flatten().copied().collect::<Vec<_>>())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HumanSection {
    pub mass: f64,
    pub damping: MatrixSpec,
    #[serde(default = "default_gravity")]
    pub gravity: f64,
    #[serde(default = "default_handle_height")]
    pub handle_height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdmittanceSection {
    pub inertia: MatrixSpec,
    pub damping: MatrixSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CableSection {
    pub rest_length: f64,
    pub stiffness: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawSpec {
    RobotState,
    VelocityFeedback,
}

impl From<LawSpec> for GuidanceLaw {
    fn from(value: LawSpec) -> Self {
        match value {
            LawSpec::RobotState => GuidanceLaw::RobotState,
            LawSpec::VelocityFeedback => GuidanceLaw::VelocityFeedback,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GuidanceSection {
    pub law: LawSpec,
    pub position_gain: f64,
    pub vertical_force: f64,
    /// Horizontal target position; the height is the handle plane.
    pub target: [f64; 2],
    pub saturation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartSpec {
    #[default]
    Rest,
    Cruise,
    SlackCruise,
}

impl From<StartSpec> for StartMode {
    fn from(value: StartSpec) -> Self {
        match value {
            StartSpec::Rest => StartMode::Rest,
            StartSpec::Cruise => StartMode::Cruise,
            StartSpec::SlackCruise => StartMode::SlackCruise,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VelocitySourceSpec {
    TrueState,
    #[default]
    SavitzkyGolay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LyapunovSpec {
    #[default]
    Regulation,
    ConstantInput,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaitSection {
    pub amplitude: f64,
    pub frequency: f64,
    /// Horizontal direction of the oscillation.
    pub axis: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "profile", rename_all = "snake_case")]
pub enum DeltaSection {
    Constant { value: [f64; 3] },
    Sinusoid { amplitude: f64, frequency: f64, axis: [f64; 3] },
    Noise { amplitude: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub duration: f64,
    #[serde(default)]
    pub start: StartSpec,
    /// Initial horizontal distance between human and target.
    #[serde(default = "default_offset")]
    pub offset: f64,
    #[serde(default)]
    pub velocity_source: VelocitySourceSpec,
    #[serde(default = "default_sg_window")]
    pub sg_window: usize,
    #[serde(default = "default_sg_poly_order")]
    pub sg_poly_order: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub lyapunov: LyapunovSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gait: Option<GaitSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<DeltaSection>,
}

fn default_gravity() -> f64 {
    GRAVITY
}
fn default_handle_height() -> f64 {
    DEFAULT_HANDLE_HEIGHT
}
fn default_dt() -> f64 {
    1e-3
}
fn default_offset() -> f64 {
    10.0
}
fn default_sg_window() -> usize {
    11
}
fn default_sg_poly_order() -> usize {
    3
}

/// One complete scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    pub human: HumanSection,
    pub admittance: AdmittanceSection,
    pub cable: CableSection,
    pub guidance: GuidanceSection,
    pub sim: SimSection,
}

/// A scenario resolved into core types, ready to simulate.
pub struct BuiltScenario {
    pub name: String,
    pub params: ModelParams,
    pub guidance: GuidanceConfig,
    pub sim: SimConfig,
}

impl Scenario {
    /// Validates every parameter and assembles the core configuration.
    pub fn build(&self) -> Result<BuiltScenario, CliError> {
        let validation = |e: tether_guide::Error| CliError::Validation(e.to_string());

        let human = HumanParams::new(
            self.human.mass,
            self.human.damping.to_mat3(),
            self.human.gravity,
            self.human.handle_height,
        )
        .map_err(validation)?;
        let admittance =
            AdmittanceParams::new(self.admittance.inertia.to_mat3(), self.admittance.damping.to_mat3())
                .map_err(validation)?;
        let cable =
            CableParams::new(self.cable.rest_length, self.cable.stiffness).map_err(validation)?;
        let params = ModelParams { human, admittance, cable };

        let target = Vec3::new(
            self.guidance.target[0],
            self.guidance.target[1],
            self.human.handle_height,
        );
        let guidance = GuidanceConfig::new(
            self.guidance.law.into(),
            self.guidance.position_gain,
            self.guidance.vertical_force,
            target,
            self.guidance.saturation,
            &params.human,
        )
        .map_err(validation)?;

        if !(self.sim.duration >= 0.0 && self.sim.duration.is_finite()) {
            return Err(CliError::Validation("sim duration must be nonnegative".into()));
        }
        if !(self.sim.offset.is_finite()) {
            return Err(CliError::Validation("sim offset must be finite".into()));
        }

        let x0 = initial_state(self.sim.start.into(), self.sim.offset, &guidance, &params)
            .map_err(validation)?;

        let mut sim = SimConfig::new(x0, guidance.clone(), self.sim.duration);
        sim.dt = self.sim.dt;
        sim.velocity_source = match self.sim.velocity_source {
            VelocitySourceSpec::TrueState => VelocitySource::TrueState,
            VelocitySourceSpec::SavitzkyGolay => VelocitySource::SavitzkyGolay,
        };
        sim.sg_window = self.sim.sg_window;
        sim.sg_poly_order = self.sim.sg_poly_order;
        sim.seed = self.sim.seed;
        sim.lyapunov_mode = match self.sim.lyapunov {
            LyapunovSpec::Regulation => LyapunovMode::Regulation,
            LyapunovSpec::ConstantInput => LyapunovMode::ConstantInput,
        };
        sim.gait = self.sim.gait.as_ref().map(|g| GaitConfig {
            amplitude: g.amplitude,
            frequency: g.frequency,
            axis: Vec3::new(g.axis[0], g.axis[1], 0.0),
        });
        sim.delta_profile = match &self.sim.delta {
            None => DeltaProfile::None,
            Some(DeltaSection::Constant { value }) => {
                DeltaProfile::Constant(Vec3::new(value[0], value[1], value[2]))
            }
            Some(DeltaSection::Sinusoid { amplitude, frequency, axis }) => DeltaProfile::Sinusoid {
                amplitude: *amplitude,
                frequency: *frequency,
                axis: Vec3::new(axis[0], axis[1], axis[2]),
            },
            Some(DeltaSection::Noise { amplitude }) => {
                DeltaProfile::Noise { amplitude: *amplitude }
            }
        };

        // Cheap dry validation of the integrator configuration (window and
        // order bounds) before any heavy work.
        tether_guide::savgol::SavitzkyGolay::new(sim.sg_window, sim.sg_poly_order)
            .map_err(validation)?;

        Ok(BuiltScenario { name: self.name.clone(), params, guidance, sim })
    }
}

/// One law entry of a sweep, optionally retuning the admittance damping
/// (each law runs with its own tuned value).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepLaw {
    pub law: LawSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admittance_damping: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub name: String,
    /// Parameter path the grid varies, e.g. "human.damping".
    pub axis: String,
    pub values: Vec<f64>,
    pub laws: Vec<SweepLaw>,
}

/// A sweep file: grid description plus the base scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub sweep: SweepSection,
    pub base: Scenario,
}

pub const SWEEP_AXES: &[&str] = &[
    "human.damping",
    "admittance.damping",
    "cable.stiffness",
    "guidance.vertical_force",
];

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.sweep.values.is_empty() {
            return Err(CliError::Validation("sweep values must be non-empty".into()));
        }
        if self.sweep.values.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Validation("sweep values must be finite".into()));
        }
        if self.sweep.laws.is_empty() {
            return Err(CliError::Validation("sweep needs at least one law".into()));
        }
        if !SWEEP_AXES.contains(&self.sweep.axis.as_str()) {
            return Err(CliError::Validation(format!(
                "unknown sweep axis '{}' (supported: {})",
                self.sweep.axis,
                SWEEP_AXES.join(", ")
            )));
        }
        Ok(())
    }

    /// Materializes the scenario for one grid point.
    pub fn grid_scenario(&self, law: &SweepLaw, value: f64) -> Scenario {
        let mut s = self.base.clone();
        s.guidance.law = law.law;
        if let Some(d_a) = law.admittance_damping {
            s.admittance.damping = MatrixSpec::Scalar(d_a);
        }
        match self.sweep.axis.as_str() {
            "human.damping" => s.human.damping = MatrixSpec::Scalar(value),
            "admittance.damping" => s.admittance.damping = MatrixSpec::Scalar(value),
            "cable.stiffness" => s.cable.stiffness = value,
            "guidance.vertical_force" => s.guidance.vertical_force = value,
            _ => unreachable!("axis validated"),
        }
        s.name = format!(
            "{}_{}_{}",
            self.sweep.name,
            match law.law {
                LawSpec::RobotState => "robot_state",
                LawSpec::VelocityFeedback => "velocity_feedback",
            },
            fmt_value(value)
        );
        s
    }
}

fn fmt_value(v: f64) -> String {
    let s = format!("{v}");
    s.replace('.', "p").replace('-', "m")
}

/// Either kind of configuration file.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedConfig {
    Scenario(Scenario),
    Sweep(SweepSpec),
}

/// Parses a configuration from TOML text. `origin` names the source in
/// error messages.
pub fn parse_config(text: &str, origin: &str) -> Result<LoadedConfig, CliError> {
    let value: toml::Value = toml::from_str(text).map_err(|e| CliError::Parse {
        origin: origin.to_string(),
        message: e.to_string(),
    })?;
    let is_sweep = value.get("sweep").is_some();
    if is_sweep {
        let spec: SweepSpec = toml::from_str(text).map_err(|e| CliError::Parse {
            origin: origin.to_string(),
            message: e.to_string(),
        })?;
        spec.validate()?;
        // Every grid point must build cleanly so failures surface at load
        // time, not mid-sweep.
        for law in &spec.sweep.laws {
            for &v in &spec.sweep.values {
                spec.grid_scenario(law, v).build()?;
            }
        }
        Ok(LoadedConfig::Sweep(spec))
    } else {
        let scenario: Scenario = toml::from_str(text).map_err(|e| CliError::Parse {
            origin: origin.to_string(),
            message: e.to_string(),
        })?;
        if scenario.name.is_empty() {
            return Err(CliError::Validation("scenario name must not be empty".into()));
        }
        scenario.build()?;
        Ok(LoadedConfig::Scenario(scenario))
    }
}

/// Loads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<LoadedConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_config(&text, &path.display().to_string())
}
