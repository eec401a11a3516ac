//! Guidance laws.
//!
//! Both laws command the robot's admittance filter. The robot-state law is
//! a saturated proportional position controller plus a constant vertical
//! force feedforward; the velocity-feedback law adds a term proportional to
//! the human's velocity so the robot keeps pulling while the human walks.

use crate::error::{Error, Result};
use crate::linalg::{self, Vec3};
use crate::model::{AdmittanceParams, CableParams, HumanParams, SystemState};

/// Which guidance law drives the robot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuidanceLaw {
    /// Position error feedback on the robot state only.
    RobotState,
    /// RobotState plus human velocity feedback.
    VelocityFeedback,
}

impl GuidanceLaw {
    pub fn name(&self) -> &'static str {
        match self {
            GuidanceLaw::RobotState => "robot_state",
            GuidanceLaw::VelocityFeedback => "velocity_feedback",
        }
    }
}

impl std::fmt::Display for GuidanceLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Guidance configuration.
///
/// `position_gain` acts on the horizontal components of the robot position
/// error only; the vertical channel carries the constant `vertical_force`
/// feedforward. The horizontal command is norm-limited to `saturation` so
/// the human never feels more than that pull.
#[derive(Debug, Clone, PartialEq)]
pub struct GuidanceConfig {
    pub law: GuidanceLaw,
    pub position_gain: f64,
    pub vertical_force: f64,
    /// Desired human position; its z component sits on the handle plane.
    pub target: Vec3,
    pub saturation: f64,
}

impl GuidanceConfig {
    pub fn new(
        law: GuidanceLaw,
        position_gain: f64,
        vertical_force: f64,
        target: Vec3,
        saturation: f64,
        human: &HumanParams,
    ) -> Result<Self> {
        if !(position_gain > 0.0 && position_gain.is_finite()) {
            return Err(Error::InvalidParameter("position gain must be positive".into()));
        }
        if !(saturation > 0.0 && saturation.is_finite()) {
            return Err(Error::InvalidParameter("saturation bound must be positive".into()));
        }
        // Only positivity is structural. The upper feasibility bound
        // (below the human's weight) is a stability condition reported by
        // the analysis; configurations violating it still run and abort
        // with a liftoff error when the assumption actually breaks.
        if !(vertical_force > 0.0 && vertical_force.is_finite()) {
            return Err(Error::InvalidParameter(
                "desired vertical cable force must be positive".into(),
            ));
        }
        if !linalg::vec_finite(&target) {
            return Err(Error::InvalidParameter("target must be finite".into()));
        }
        if (target.z - human.handle_height).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "target height {} must equal the handle height {}",
                target.z, human.handle_height
            )));
        }
        Ok(Self { law, position_gain, vertical_force, target, saturation })
    }

    /// Constant vertical force feedforward.
    pub fn force_reference(&self) -> Vec3 {
        Vec3::new(0.0, 0.0, self.vertical_force)
    }
}

/// Robot reference position: hover directly above the target, offset by the
/// cable rest length plus the stretch needed to carry the vertical force.
pub fn robot_reference(cfg: &GuidanceConfig, cable: &CableParams) -> Result<Vec3> {
    if cfg.vertical_force == 0.0 {
        return Err(Error::DegenerateReference);
    }
    let f_r = cfg.force_reference();
    Ok(cfg.target + f_r * (1.0 / cable.stiffness + cable.rest_length / f_r.norm()))
}

/// One evaluated control command.
///
/// `guidance` is the saturated position-law value. For the velocity-feedback
/// law it excludes the velocity term, which is what force-tracking error is
/// measured against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlOutput {
    pub u_a: Vec3,
    pub guidance: Vec3,
    pub saturated: bool,
}

/// Limits the horizontal norm of `raw` to `limit`, preserving direction and
/// leaving the vertical component untouched.
pub fn saturate_horizontal(raw: &Vec3, limit: f64) -> (Vec3, bool) {
    let h = linalg::horizontal_norm(raw);
    if h > limit {
        let scale = limit / h;
        (Vec3::new(raw.x * scale, raw.y * scale, raw.z), true)
    } else {
        (*raw, false)
    }
}

/// Robot-state guidance: saturated proportional feedback on the horizontal
/// robot position error plus the vertical force feedforward.
pub fn robot_state_guidance(
    x: &SystemState,
    cfg: &GuidanceConfig,
    cable: &CableParams,
) -> ControlOutput {
    let p_r_ref = reference_unchecked(cfg, cable);
    let e_r = p_r_ref - x.p_r;
    // Gain matrix is diag(k, k, 0): no vertical position feedback.
    let raw = Vec3::new(cfg.position_gain * e_r.x, cfg.position_gain * e_r.y, 0.0);
    let (clamped, saturated) = saturate_horizontal(&raw, cfg.saturation);
    let u_a = clamped + cfg.force_reference();
    ControlOutput { u_a, guidance: u_a, saturated }
}

/// Velocity-feedback guidance: the robot-state command plus a force
/// proportional to the human velocity through the admittance damping.
///
/// `x.v_h` carries whatever velocity the caller wants fed back, true state
/// or estimator output.
pub fn velocity_feedback_guidance(
    x: &SystemState,
    cfg: &GuidanceConfig,
    admittance: &AdmittanceParams,
    cable: &CableParams,
) -> ControlOutput {
    let base = robot_state_guidance(x, cfg, cable);
    ControlOutput {
        u_a: base.u_a + admittance.damping * x.v_h,
        guidance: base.guidance,
        saturated: base.saturated,
    }
}

/// Evaluates whichever law the configuration selects.
pub fn guidance(
    x: &SystemState,
    cfg: &GuidanceConfig,
    admittance: &AdmittanceParams,
    cable: &CableParams,
) -> ControlOutput {
    match cfg.law {
        GuidanceLaw::RobotState => robot_state_guidance(x, cfg, cable),
        GuidanceLaw::VelocityFeedback => velocity_feedback_guidance(x, cfg, admittance, cable),
    }
}

// Same as robot_reference but for configs already validated at construction,
// where vertical_force > 0 is guaranteed.
fn reference_unchecked(cfg: &GuidanceConfig, cable: &CableParams) -> Vec3 {
    debug_assert!(cfg.vertical_force != 0.0);
    let f_r = cfg.force_reference();
    cfg.target + f_r * (1.0 / cable.stiffness + cable.rest_length / f_r.norm())
}
