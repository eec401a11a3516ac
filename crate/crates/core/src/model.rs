//! Physical model of the coupled system.
//!
//! The human is a mass-damper constrained to the ground plane and pulled by
//! the cable; the aerial robot runs an admittance filter that renders it as
//! a virtual mass-damper driven by the measured cable force and a control
//! input. The cable is a unilateral spring along its principal direction:
//! it pulls when stretched beyond its rest length and does nothing when
//! slack.

use crate::error::{Error, Result};
use crate::linalg::{self, Mat3, Vec3};
use crate::{DEFAULT_HANDLE_HEIGHT, GRAVITY};

/// Human mass-damper parameters.
///
/// `handle_height` is the constant height of the cable attachment point;
/// the human's vertical position stays pinned there.
#[derive(Debug, Clone, PartialEq)]
pub struct HumanParams {
    pub mass: f64,
    pub damping: Mat3,
    pub gravity: f64,
    pub handle_height: f64,
}

impl HumanParams {
    pub fn new(mass: f64, damping: Mat3, gravity: f64, handle_height: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter("human mass must be positive".into()));
        }
        if !(gravity > 0.0 && gravity.is_finite()) {
            return Err(Error::InvalidParameter("gravity must be positive".into()));
        }
        if !handle_height.is_finite() {
            return Err(Error::InvalidParameter("handle height must be finite".into()));
        }
        linalg::check_spd(&damping, "human damping")?;
        Ok(Self { mass, damping, gravity, handle_height })
    }

    /// Isotropic damping `d * I` with standard gravity and handle height.
    pub fn isotropic(mass: f64, damping: f64) -> Result<Self> {
        Self::new(mass, Mat3::identity() * damping, GRAVITY, DEFAULT_HANDLE_HEIGHT)
    }

    /// Weight m*g [N].
    pub fn weight(&self) -> f64 {
        self.mass * self.gravity
    }
}

/// Virtual inertia and damping rendered by the robot's admittance filter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmittanceParams {
    pub inertia: Mat3,
    pub damping: Mat3,
    inertia_inv: Mat3,
}

impl AdmittanceParams {
    pub fn new(inertia: Mat3, damping: Mat3) -> Result<Self> {
        linalg::check_spd(&inertia, "admittance inertia")?;
        linalg::check_spd(&damping, "admittance damping")?;
        let inertia_inv = inertia
            .try_inverse()
            .ok_or(Error::SingularMatrix("admittance inertia"))?;
        Ok(Self { inertia, damping, inertia_inv })
    }

    pub fn isotropic(inertia: f64, damping: f64) -> Result<Self> {
        Self::new(Mat3::identity() * inertia, Mat3::identity() * damping)
    }

    pub fn inertia_inv(&self) -> &Mat3 {
        &self.inertia_inv
    }
}

/// Elastic cable with rest length `rest_length` and stiffness `stiffness`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CableParams {
    pub rest_length: f64,
    pub stiffness: f64,
}

impl CableParams {
    pub fn new(rest_length: f64, stiffness: f64) -> Result<Self> {
        if !(rest_length > 0.0 && rest_length.is_finite()) {
            return Err(Error::InvalidParameter("cable rest length must be positive".into()));
        }
        if !(stiffness > 0.0 && stiffness.is_finite()) {
            return Err(Error::InvalidParameter("cable stiffness must be positive".into()));
        }
        Ok(Self { rest_length, stiffness })
    }

    /// Elastic energy stored at cable length `len`: zero while slack,
    /// quadratic in the stretch once taut.
    pub fn elastic_energy(&self, len: f64) -> f64 {
        let stretch = len - self.rest_length;
        if stretch > 0.0 {
            0.5 * self.stiffness * stretch * stretch
        } else {
            0.0
        }
    }
}

/// Bundle of all physical parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub human: HumanParams,
    pub admittance: AdmittanceParams,
    pub cable: CableParams,
}

/// Positions and velocities of human and robot, all in the world frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemState {
    pub p_h: Vec3,
    pub v_h: Vec3,
    pub p_r: Vec3,
    pub v_r: Vec3,
}

impl SystemState {
    pub fn new(p_h: Vec3, v_h: Vec3, p_r: Vec3, v_r: Vec3) -> Self {
        Self { p_h, v_h, p_r, v_r }
    }

    pub fn is_finite(&self) -> bool {
        linalg::vec_finite(&self.p_h)
            && linalg::vec_finite(&self.v_h)
            && linalg::vec_finite(&self.p_r)
            && linalg::vec_finite(&self.v_r)
    }

    /// Largest absolute component, used for blowup detection.
    pub fn amax(&self) -> f64 {
        self.p_h
            .amax()
            .max(self.v_h.amax())
            .max(self.p_r.amax())
            .max(self.v_r.amax())
    }

    /// Pins the human to the ground plane: vertical position to the handle
    /// height, vertical velocity to zero.
    pub fn project_to_ground(&mut self, handle_height: f64) {
        self.p_h.z = handle_height;
        self.v_h.z = 0.0;
    }
}

/// Human intent force and robot tracking-error force.
///
/// Both are bounded disturbances; norms are clamped at injection time.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExogenousInputs {
    pub u_h: Vec3,
    pub delta: Vec3,
}

impl ExogenousInputs {
    /// Clamps each input to the given norm bound, preserving direction.
    pub fn clamped(u_h: Vec3, u_h_bound: f64, delta: Vec3, delta_bound: f64) -> Self {
        Self {
            u_h: clamp_norm(u_h, u_h_bound),
            delta: clamp_norm(delta, delta_bound),
        }
    }
}

fn clamp_norm(v: Vec3, bound: f64) -> Vec3 {
    let n = v.norm();
    if n > bound {
        v * (bound / n)
    } else {
        v
    }
}

/// Cable force applied to the human, plus the scalar tension.
///
/// The force applied to the robot is exactly the negation of `force`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CableForce {
    pub force: Vec3,
    pub tension: f64,
}

/// Unilateral spring force of the cable on the human.
///
/// With `l_c = p_r - p_h`, the tension is `k * (|l_c| - l0)` when the cable
/// is stretched beyond its rest length and zero otherwise (slack, or exactly
/// taut, or the degenerate zero-length case).
pub fn cable_force(p_h: &Vec3, p_r: &Vec3, cable: &CableParams) -> CableForce {
    let l_c = p_r - p_h;
    let len = l_c.norm();
    let stretch = len - cable.rest_length;
    if stretch > 0.0 {
        let tension = cable.stiffness * stretch;
        CableForce { force: l_c * (tension / len), tension }
    } else {
        CableForce { force: Vec3::zeros(), tension: 0.0 }
    }
}

/// Vertical ground reaction that keeps the human on the ground plane.
///
/// The ground carries whatever weight the cable does not. Fails with
/// [`Error::Liftoff`] when the vertical cable pull reaches the human's
/// weight, since the contact assumption no longer holds.
pub fn ground_reaction(f_c: &Vec3, human: &HumanParams) -> Result<Vec3> {
    let weight = human.weight();
    if f_c.z >= weight {
        return Err(Error::Liftoff { pull: f_c.z, weight });
    }
    Ok(Vec3::new(0.0, 0.0, weight - f_c.z))
}

/// Time derivative of the full 12-dimensional state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    pub v_h: Vec3,
    pub a_h: Vec3,
    pub v_r: Vec3,
    pub a_r: Vec3,
}

/// Closed-loop state derivative for control input `u_a` and exogenous
/// forces `exo`.
///
/// Human block: `m a_h = -g_H - D_H v_h + F_c + f_g + u_h`, with the
/// vertical acceleration projected to zero afterwards (ground constraint).
/// Robot block: `a_r = M_A^-1 (-D_A v_r - F_c + u_a + delta)`.
pub fn state_derivative(
    x: &SystemState,
    u_a: &Vec3,
    exo: &ExogenousInputs,
    params: &ModelParams,
) -> Result<StateDerivative> {
    let cable = cable_force(&x.p_h, &x.p_r, &params.cable);
    let f_g = ground_reaction(&cable.force, &params.human)?;

    let gravity_force = Vec3::new(0.0, 0.0, -params.human.weight());
    let mut a_h = (gravity_force - params.human.damping * x.v_h + cable.force + f_g + exo.u_h)
        / params.human.mass;
    a_h.z = 0.0;

    let a_r = params.admittance.inertia_inv()
        * (-(params.admittance.damping * x.v_r) - cable.force + u_a + exo.delta);

    Ok(StateDerivative { v_h: x.v_h, a_h, v_r: x.v_r, a_r })
}

/// Kinetic plus cable-elastic energy of the state. Vertical potential terms
/// are excluded: the ground constraint keeps the human's height fixed and
/// the admittance filter has no gravity term.
pub fn mechanical_energy(x: &SystemState, params: &ModelParams) -> f64 {
    let kinetic_h = 0.5 * params.human.mass * x.v_h.norm_squared();
    let kinetic_r = 0.5 * (x.v_r.dot(&(params.admittance.inertia * x.v_r)));
    let elastic = params.cable.elastic_energy((x.p_r - x.p_h).norm());
    kinetic_h + kinetic_r + elastic
}
