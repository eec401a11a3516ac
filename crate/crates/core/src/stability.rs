//! Closed-form stability conditions, steady-state predictors, storage
//! functions and numerical certificate checks.
//!
//! Two operating regimes are analyzed. In regulation the robot drives the
//! human to a fixed target; the storage function is anchored at that
//! equilibrium. In the saturated far-field regime the guidance command is a
//! constant force and both bodies converge to a constant-velocity cruise;
//! there the storage is expressed in error coordinates around that cruise.

use crate::control::{GuidanceConfig, GuidanceLaw};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat3, Mat6, Vec3};
use crate::model::{CableParams, HumanParams, ModelParams};
use crate::model::SystemState;
use crate::trajectory::{LyapunovMode, TrajectoryLog};

/// Feasibility of the desired vertical cable force: it must be positive and
/// strictly below the human's weight. Returns the verdict and the distance
/// to the nearer bound.
pub fn vertical_force_condition(vertical_force: f64, human: &HumanParams) -> (bool, f64) {
    let weight = human.weight();
    let ok = vertical_force > 0.0 && vertical_force < weight;
    let margin = vertical_force.min(weight - vertical_force);
    (ok, margin)
}

/// Matrix damping condition for the velocity-feedback law: the human
/// damping must dominate a quarter of the admittance damping. Returns the
/// verdict and the minimum eigenvalue of `D_H - D_A/4`.
pub fn damping_condition(human_damping: &Mat3, admittance_damping: &Mat3) -> (bool, f64) {
    let s = human_damping - admittance_damping * 0.25;
    let min_eig = linalg::min_eigenvalue(&s.symmetric_part());
    (min_eig > 0.0, min_eig)
}

/// Scalar form of [`damping_condition`] for isotropic dampings: stable when
/// `d_a < 4 d_h`, with margin `4 d_h - d_a`.
pub fn scalar_damping_condition(d_h: f64, d_a: f64) -> (bool, f64) {
    let margin = 4.0 * d_h - d_a;
    (d_a < 4.0 * d_h, margin)
}

/// Dissipation matrix of the velocity-feedback closed loop over the stacked
/// velocities [v_h; v_r].
pub fn dissipation_matrix(human_damping: &Mat3, admittance_damping: &Mat3) -> Mat6 {
    let mut b = Mat6::zeros();
    let half = admittance_damping * 0.5;
    for i in 0..3 {
        for j in 0..3 {
            b[(i, j)] = human_damping[(i, j)];
            b[(i + 3, j + 3)] = admittance_damping[(i, j)];
            b[(i, j + 3)] = -half[(i, j)];
            b[(i + 3, j)] = -half[(i, j)];
        }
    }
    b
}

/// Cruise velocity and steady cable force under the robot-state law with a
/// constant guidance force `gamma`. Both dampings share the load, so the
/// human feels less than the commanded force.
pub fn steady_state_robot_state(
    gamma: &Vec3,
    human_damping: &Mat3,
    admittance_damping: &Mat3,
) -> Result<(Vec3, Vec3)> {
    let sum = human_damping + admittance_damping;
    let inv = sum
        .try_inverse()
        .ok_or(Error::SingularMatrix("damping sum"))?;
    let v_star = inv * linalg::horizontal(gamma);
    let f_ss = gamma - admittance_damping * v_star;
    Ok((v_star, f_ss))
}

/// Cruise velocity and steady cable force under the velocity-feedback law:
/// the cable force matches the guidance command exactly.
pub fn steady_state_velocity_feedback(
    gamma: &Vec3,
    human_damping: &Mat3,
) -> Result<(Vec3, Vec3)> {
    let inv = human_damping
        .try_inverse()
        .ok_or(Error::SingularMatrix("human damping"))?;
    let v_star = inv * linalg::horizontal(gamma);
    Ok((v_star, *gamma))
}

/// Storage function for the regulation task.
///
/// Quadratic kinetic and position-error terms plus the cable elastic energy
/// and the work against the vertical force reference, shifted by the
/// constant that puts the zero exactly at the target equilibrium.
pub fn lyapunov_regulation(x: &SystemState, cfg: &GuidanceConfig, params: &ModelParams) -> f64 {
    let kinetic = 0.5 * params.human.mass * x.v_h.norm_squared()
        + 0.5 * x.v_r.dot(&(params.admittance.inertia * x.v_r));

    let f_r = cfg.force_reference();
    let p_r_ref = cfg.target + f_r * (1.0 / params.cable.stiffness + params.cable.rest_length / f_r.norm());
    let e_r = p_r_ref - x.p_r;
    let position = 0.5 * cfg.position_gain * (e_r.x * e_r.x + e_r.y * e_r.y);

    let l_c = x.p_r - x.p_h;
    let cable_terms = params.cable.elastic_energy(l_c.norm()) - l_c.dot(&f_r);

    kinetic + position + cable_terms + anchor_constant(&f_r, &params.cable)
}

/// Storage function in error coordinates around a constant-velocity cruise.
///
/// `v_star` is the cruise velocity and `gamma_z` the vertical component of
/// the constant guidance force. The cable term is anchored at the cruise
/// cable force `D_H v* + gamma_z e_z`, which both laws share, so the value
/// is zero exactly on the cruise trajectory.
pub fn lyapunov_constant_input(
    x: &SystemState,
    v_star: &Vec3,
    gamma_z: f64,
    params: &ModelParams,
) -> f64 {
    let v_h_err = x.v_h - v_star;
    let v_r_err = x.v_r - v_star;
    let kinetic = 0.5 * params.human.mass * v_h_err.norm_squared()
        + 0.5 * v_r_err.dot(&(params.admittance.inertia * v_r_err));

    let anchor_force = params.human.damping * v_star + Vec3::new(0.0, 0.0, gamma_z);
    let l_c = x.p_r - x.p_h;
    let cable_terms = params.cable.elastic_energy(l_c.norm()) - l_c.dot(&anchor_force);

    kinetic + cable_terms + anchor_constant(&anchor_force, &params.cable)
}

// Constant making T(|l_c|) - l_c . f reach exactly zero at its minimizer,
// the taut cable aligned with f and stretched to carry it.
fn anchor_constant(force: &Vec3, cable: &CableParams) -> f64 {
    let f = force.norm();
    f * f / (2.0 * cable.stiffness) + cable.rest_length * f
}

/// Analytic storage rate for the active law, velocities taken in whatever
/// coordinates the analysis uses (error coordinates for cruise, plain for
/// regulation).
pub fn dissipation_rate(
    v_h: &Vec3,
    v_r: &Vec3,
    human_damping: &Mat3,
    admittance_damping: &Mat3,
    law: GuidanceLaw,
) -> f64 {
    let human_term = v_h.dot(&(human_damping * v_h));
    let robot_term = v_r.dot(&(admittance_damping * v_r));
    match law {
        GuidanceLaw::RobotState => -(human_term + robot_term),
        // Quadratic form of the dissipation matrix with its velocity
        // cross-coupling.
        GuidanceLaw::VelocityFeedback => {
            -(human_term - v_h.dot(&(admittance_damping * v_r)) + robot_term)
        }
    }
}

/// One storage-rate comparison point along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovSample {
    pub t: f64,
    pub value: f64,
    /// Central finite difference of the logged storage values.
    pub rate_numeric: f64,
    /// Analytic rate for the active law at this state.
    pub dissipation_bound: f64,
}

/// Pairs the finite-difference storage rate with the analytic rate at each
/// interior sample of a log.
pub fn lyapunov_samples(log: &TrajectoryLog, params: &ModelParams) -> Vec<LyapunovSample> {
    let n = log.samples.len();
    if n < 3 {
        return Vec::new();
    }
    let v_star = match log.lyapunov_mode {
        LyapunovMode::Regulation => Vec3::zeros(),
        LyapunovMode::ConstantInput => log.v_star.unwrap_or_else(Vec3::zeros),
    };
    (1..n - 1)
        .map(|k| {
            let s = &log.samples[k];
            let rate_numeric =
                (log.samples[k + 1].lyapunov - log.samples[k - 1].lyapunov) / (2.0 * log.dt);
            let dissipation_bound = dissipation_rate(
                &(s.state.v_h - v_star),
                &(s.state.v_r - v_star),
                &params.human.damping,
                &params.admittance.damping,
                log.law,
            );
            LyapunovSample { t: s.t, value: s.lyapunov, rate_numeric, dissipation_bound }
        })
        .collect()
}

/// Outcome of the numerical passivity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassivityReport {
    pub ok: bool,
    /// Largest observed excess of the storage rate over the supply rate.
    pub worst_violation: f64,
}

/// Default tolerance on the passivity defect [W].
pub const PASSIVITY_TOL: f64 = 1e-4;

/// Verifies output-strict passivity along a logged trajectory: the storage
/// rate must not exceed the input power minus the dissipation quadratic
/// form. Differences are taken over each integration interval, where the
/// injected inputs are constant.
pub fn passivity_check(
    log: &TrajectoryLog,
    params: &ModelParams,
    tol: f64,
) -> Result<PassivityReport> {
    let n = log.samples.len();
    if n < 3 {
        return Err(Error::InsufficientSamples { got: n, need: 3 });
    }
    let v_star = match log.lyapunov_mode {
        LyapunovMode::Regulation => Vec3::zeros(),
        LyapunovMode::ConstantInput => log.v_star.unwrap_or_else(Vec3::zeros),
    };

    let dissipation = |k: usize| -> f64 {
        let s = &log.samples[k];
        dissipation_rate(
            &(s.state.v_h - v_star),
            &(s.state.v_r - v_star),
            &params.human.damping,
            &params.admittance.damping,
            log.law,
        )
    };

    let mut worst = f64::NEG_INFINITY;
    for k in 0..n - 1 {
        let dv = (log.samples[k + 1].lyapunov - log.samples[k].lyapunov) / log.dt;
        // Inputs are held over the interval, so the supply uses the held
        // input against the trapezoidal velocity average.
        let s_k = &log.samples[k];
        let s_next = &log.samples[k + 1];
        let y_h = 0.5 * ((s_k.state.v_h - v_star) + (s_next.state.v_h - v_star));
        let y_r = 0.5 * ((s_k.state.v_r - v_star) + (s_next.state.v_r - v_star));
        let supply_rate = s_k.u_h.dot(&y_h) + s_k.delta.dot(&y_r);
        let dissipation_rate = 0.5 * (dissipation(k) + dissipation(k + 1));
        let violation = dv - supply_rate - dissipation_rate;
        worst = worst.max(violation);
    }
    Ok(PassivityReport { ok: worst <= tol, worst_violation: worst })
}

/// Scalar damping verdict, present only when both dampings are isotropic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarDampingCheck {
    pub ok: bool,
    pub margin: f64,
    /// Admittance damping ceiling, four times the human damping.
    pub limit: f64,
}

/// Machine-checkable verdicts and margins for every closed-form condition,
/// plus the steady-state predictions of both laws.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub vertical_force_ok: bool,
    pub vertical_force_margin: f64,
    pub damping_ok: bool,
    pub damping_min_eig: f64,
    pub scalar_damping: Option<ScalarDampingCheck>,
    pub v_ss_robot_state: Vec3,
    pub f_ss_robot_state: Vec3,
    pub v_ss_velocity_feedback: Vec3,
    pub f_ss_velocity_feedback: Vec3,
}

impl StabilityReport {
    /// Evaluates every condition for the given configuration and the
    /// far-field guidance force `gamma` (only its horizontal part enters
    /// the predictors).
    pub fn evaluate(cfg: &GuidanceConfig, params: &ModelParams, gamma: &Vec3) -> Result<Self> {
        let (vertical_force_ok, vertical_force_margin) =
            vertical_force_condition(cfg.vertical_force, &params.human);
        let (damping_ok, damping_min_eig) =
            damping_condition(&params.human.damping, &params.admittance.damping);
        let scalar_damping = match (
            linalg::isotropic_scale(&params.human.damping),
            linalg::isotropic_scale(&params.admittance.damping),
        ) {
            (Some(d_h), Some(d_a)) => {
                let (ok, margin) = scalar_damping_condition(d_h, d_a);
                Some(ScalarDampingCheck { ok, margin, limit: 4.0 * d_h })
            }
            _ => None,
        };

        let gamma_xy = linalg::horizontal(gamma);
        let (v_rs, f_rs) = steady_state_robot_state(
            &gamma_xy,
            &params.human.damping,
            &params.admittance.damping,
        )?;
        let (v_vf, f_vf) = steady_state_velocity_feedback(&gamma_xy, &params.human.damping)?;

        Ok(Self {
            vertical_force_ok,
            vertical_force_margin,
            damping_ok,
            damping_min_eig,
            scalar_damping,
            v_ss_robot_state: v_rs,
            f_ss_robot_state: f_rs,
            v_ss_velocity_feedback: v_vf,
            f_ss_velocity_feedback: f_vf,
        })
    }

    /// True when every applicable condition holds.
    pub fn all_ok(&self) -> bool {
        self.vertical_force_ok
            && self.damping_ok
            && self.scalar_damping.map_or(true, |c| c.ok)
    }

    /// Flat key-value rendering, one entry per line.
    pub fn to_text(&self) -> String {
        let mut lines = vec![
            format!("vertical_force_ok = {}", self.vertical_force_ok),
            format!("vertical_force_margin = {:.6}", self.vertical_force_margin),
            format!("damping_ok = {}", self.damping_ok),
            format!("damping_min_eig = {:.6}", self.damping_min_eig),
        ];
        if let Some(c) = self.scalar_damping {
            lines.push(format!("scalar_damping_ok = {}", c.ok));
            lines.push(format!("scalar_damping_margin = {:.6}", c.margin));
            lines.push(format!("scalar_damping_limit = {:.6}", c.limit));
        }
        for (name, v) in [
            ("v_ss_robot_state", &self.v_ss_robot_state),
            ("f_ss_robot_state", &self.f_ss_robot_state),
            ("v_ss_velocity_feedback", &self.v_ss_velocity_feedback),
            ("f_ss_velocity_feedback", &self.f_ss_velocity_feedback),
        ] {
            for (axis, c) in ["x", "y", "z"].iter().zip(v.iter()) {
                lines.push(format!("{name}_{axis} = {c:.6}"));
            }
        }
        lines.join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AdmittanceParams, CableParams, HumanParams};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn human() -> HumanParams {
        HumanParams::isotropic(70.0, 30.0).unwrap()
    }

    fn params(d_h: f64, d_a: f64) -> ModelParams {
        ModelParams {
            human: HumanParams::isotropic(70.0, d_h).unwrap(),
            admittance: AdmittanceParams::isotropic(5.0, d_a).unwrap(),
            cable: CableParams::new(1.5, 100.0).unwrap(),
        }
    }

    fn config(k_p: f64, f_z: f64, sat: f64) -> GuidanceConfig {
        GuidanceConfig::new(
            GuidanceLaw::RobotState,
            k_p,
            f_z,
            Vec3::new(0.0, 0.0, 1.0),
            sat,
            &human(),
        )
        .unwrap()
    }

    #[test]
    fn vertical_force_window() {
        let h = human();
        let (ok, margin) = vertical_force_condition(2.0, &h);
        assert!(ok);
        assert_relative_eq!(margin, 2.0, epsilon = 1e-12);

        assert!(!vertical_force_condition(0.0, &h).0);
        assert!(!vertical_force_condition(700.0, &h).0);
    }

    #[test]
    fn damping_condition_margins() {
        let eye = Mat3::identity();
        let (ok, eig) = damping_condition(&(eye * 30.0), &(eye * 100.0));
        assert!(ok);
        assert_relative_eq!(eig, 5.0, epsilon = 1e-9);

        let (ok, eig) = damping_condition(&(eye * 15.0), &(eye * 60.0));
        assert!(!ok);
        assert_relative_eq!(eig, 0.0, epsilon = 1e-9);

        let (ok, eig) = damping_condition(&(eye * 40.0), &(eye * 180.0));
        assert!(!ok);
        assert_relative_eq!(eig, -5.0, epsilon = 1e-9);
    }

    #[test]
    fn scalar_damping_margins() {
        let (ok, margin) = scalar_damping_condition(30.0, 100.0);
        assert!(ok);
        assert_relative_eq!(margin, 20.0, epsilon = 1e-12);

        let (ok, margin) = scalar_damping_condition(15.0, 60.0);
        assert!(!ok, "equality must fail the strict condition");
        assert_relative_eq!(margin, 0.0, epsilon = 1e-12);

        let (ok, margin) = scalar_damping_condition(1.0, 0.1);
        assert!(ok);
        assert_relative_eq!(margin, 3.9, epsilon = 1e-12);
    }

    #[test]
    fn cruise_prediction_robot_state() {
        let eye = Mat3::identity();
        let gamma = Vec3::new(3.0, 0.0, 0.0);
        let (v, f) = steady_state_robot_state(&gamma, &(eye * 15.0), &(eye * 13.0)).unwrap();
        assert_relative_eq!(v, Vec3::new(3.0 / 28.0, 0.0, 0.0), epsilon = 1e-12);
        assert_relative_eq!(f, Vec3::new(3.0 * 15.0 / 28.0, 0.0, 0.0), epsilon = 1e-12);

        let (v, f) = steady_state_robot_state(&Vec3::zeros(), &(eye * 15.0), &(eye * 13.0)).unwrap();
        assert_eq!(v, Vec3::zeros());
        assert_eq!(f, Vec3::zeros());

        // Vanishing admittance damping hands the whole force to the human.
        let (_, f) = steady_state_robot_state(&gamma, &(eye * 15.0), &(eye * 1e-12)).unwrap();
        assert_relative_eq!(f, gamma, epsilon = 1e-9);
    }

    #[test]
    fn cruise_prediction_velocity_feedback() {
        let eye = Mat3::identity();
        let gamma = Vec3::new(3.0, 0.0, 0.0);
        let (v, f) = steady_state_velocity_feedback(&gamma, &(eye * 30.0)).unwrap();
        assert_relative_eq!(v, Vec3::new(0.1, 0.0, 0.0), epsilon = 1e-12);
        assert_eq!(f, gamma);

        let (v, _) = steady_state_velocity_feedback(&gamma, &(eye * 15.0)).unwrap();
        assert_relative_eq!(v.x, 0.2, epsilon = 1e-12);

        let (v, f) = steady_state_velocity_feedback(&Vec3::zeros(), &(eye * 30.0)).unwrap();
        assert_eq!(v, Vec3::zeros());
        assert_eq!(f, Vec3::zeros());
    }

    fn equilibrium_state(cfg: &GuidanceConfig, p: &ModelParams) -> SystemState {
        let f_r = cfg.force_reference();
        let p_r_ref =
            cfg.target + f_r * (1.0 / p.cable.stiffness + p.cable.rest_length / f_r.norm());
        SystemState::new(cfg.target, Vec3::zeros(), p_r_ref, Vec3::zeros())
    }

    #[test]
    fn regulation_storage_vanishes_at_the_equilibrium() {
        let p = params(30.0, 100.0);
        let cfg = config(1.0, 2.0, 3.0);
        let x_e = equilibrium_state(&cfg, &p);
        assert_relative_eq!(lyapunov_regulation(&x_e, &cfg, &p), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn regulation_storage_counts_kinetic_perturbations() {
        let p = params(30.0, 100.0);
        let cfg = config(1.0, 2.0, 3.0);
        let mut x = equilibrium_state(&cfg, &p);
        x.v_h = Vec3::new(0.1, 0.0, 0.0);
        assert_relative_eq!(lyapunov_regulation(&x, &cfg, &p), 0.35, epsilon = 1e-12);
    }

    #[test]
    fn regulation_storage_on_a_slack_configuration() {
        let p = params(30.0, 100.0);
        let cfg = config(1.0, 2.0, 3.0);
        // Human 5 m short of the target, robot 0.8 m straight overhead.
        let x = SystemState::new(
            Vec3::new(-5.0, 0.0, 1.0),
            Vec3::zeros(),
            Vec3::new(-5.0, 0.0, 1.8),
            Vec3::zeros(),
        );
        // Position term 25/2, slack cable stores nothing, minus the cable
        // work 0.8*2, plus the anchoring constant 2^2/200 + 1.5*2.
        let expected = 12.5 - 1.6 + (4.0 / 200.0 + 3.0);
        let v = lyapunov_regulation(&x, &cfg, &p);
        assert_relative_eq!(v, expected, epsilon = 1e-12);
        assert!(v > 0.0);
    }

    #[test]
    fn cruise_storage_vanishes_on_the_cruise_trajectory() {
        let p = params(15.0, 13.0);
        let gamma = Vec3::new(3.0, 0.0, 2.0);
        let (v_star, f_ss) =
            steady_state_robot_state(&gamma, &p.human.damping, &p.admittance.damping).unwrap();
        let dir = f_ss / f_ss.norm();
        let len = p.cable.rest_length + f_ss.norm() / p.cable.stiffness;
        let p_h = Vec3::new(2.0, 1.0, 1.0);
        let x = SystemState::new(p_h, v_star, p_h + dir * len, v_star);
        let v = lyapunov_constant_input(&x, &v_star, gamma.z, &p);
        assert_relative_eq!(v, 0.0, epsilon = 1e-12);

        let mut perturbed = x;
        perturbed.v_h += Vec3::new(0.05, 0.0, 0.0);
        assert_relative_eq!(
            lyapunov_constant_input(&perturbed, &v_star, gamma.z, &p),
            0.5 * 70.0 * 0.0025,
            epsilon = 1e-12
        );
    }

    #[test]
    fn dissipation_rate_examples() {
        let eye = Mat3::identity();
        assert_eq!(
            dissipation_rate(&Vec3::zeros(), &Vec3::zeros(), &eye, &eye, GuidanceLaw::RobotState),
            0.0
        );
        let rate = dissipation_rate(
            &Vec3::new(0.1, 0.0, 0.0),
            &Vec3::zeros(),
            &(eye * 30.0),
            &(eye * 13.0),
            GuidanceLaw::RobotState,
        );
        assert_relative_eq!(rate, -0.3, epsilon = 1e-12);

        let v = Vec3::new(0.1, 0.0, 0.0);
        let rate = dissipation_rate(
            &v,
            &v,
            &(eye * 30.0),
            &(eye * 100.0),
            GuidanceLaw::VelocityFeedback,
        );
        assert_relative_eq!(rate, -0.3, epsilon = 1e-12);
    }

    #[test]
    fn report_flags_match_the_tuning_table() {
        let gamma = Vec3::new(3.0, 0.0, 0.0);
        let cfg = config(1.0, 2.0, 3.0);

        let report = StabilityReport::evaluate(&cfg, &params(30.0, 100.0), &gamma).unwrap();
        assert!(report.all_ok());
        let scalar = report.scalar_damping.unwrap();
        assert_relative_eq!(scalar.limit, 120.0, epsilon = 1e-12);
        assert_relative_eq!(scalar.margin, 20.0, epsilon = 1e-12);
        assert_eq!(report.f_ss_velocity_feedback, Vec3::new(3.0, 0.0, 0.0));

        let report = StabilityReport::evaluate(&cfg, &params(15.0, 60.0), &gamma).unwrap();
        assert!(!report.all_ok());
        assert!(!report.scalar_damping.unwrap().ok);

        let report = StabilityReport::evaluate(&cfg, &params(40.0, 180.0), &gamma).unwrap();
        assert!(!report.all_ok());
        assert_relative_eq!(report.scalar_damping.unwrap().limit, 160.0, epsilon = 1e-12);
    }

    #[test]
    fn report_skips_the_scalar_check_for_anisotropic_damping() {
        let cfg = config(1.0, 2.0, 3.0);
        let mut p = params(30.0, 100.0);
        let mut d = Mat3::identity() * 30.0;
        d[(0, 0)] = 35.0;
        p.human = HumanParams::new(70.0, d, 9.81, 1.0).unwrap();
        let report = StabilityReport::evaluate(&cfg, &p, &Vec3::new(3.0, 0.0, 0.0)).unwrap();
        assert!(report.scalar_damping.is_none());
        assert!(report.damping_ok);
    }

    #[test]
    fn report_text_is_flat_key_value() {
        let cfg = config(1.0, 2.0, 3.0);
        let report =
            StabilityReport::evaluate(&cfg, &params(30.0, 100.0), &Vec3::new(3.0, 0.0, 0.0))
                .unwrap();
        let text = report.to_text();
        assert!(text.lines().all(|l| l.contains(" = ")));
        assert!(text.contains("scalar_damping_limit = 120.000000"));
        assert!(text.contains("v_ss_velocity_feedback_x = 0.100000"));
    }

    proptest! {
        /// The human always feels less force than commanded under the
        /// robot-state law, and walks slower than under velocity feedback.
        #[test]
        fn force_deficit_and_speed_ordering(
            gx in 0.5..5.0f64, gy in -3.0..3.0f64,
            d_h in 5.0..50.0f64, d_a in 1.0..200.0f64,
        ) {
            let eye = Mat3::identity();
            let gamma = Vec3::new(gx, gy, 0.0);
            let (v_rs, f_rs) =
                steady_state_robot_state(&gamma, &(eye * d_h), &(eye * d_a)).unwrap();
            let (v_vf, f_vf) =
                steady_state_velocity_feedback(&gamma, &(eye * d_h)).unwrap();
            prop_assert!(f_rs.norm() < gamma.norm());
            prop_assert_eq!(f_vf, gamma);
            prop_assert!(v_vf.norm() > v_rs.norm());
        }

        /// The quarter-damping condition and positive definiteness of the
        /// dissipation matrix are the same test.
        #[test]
        fn schur_equivalence_on_random_spd_pairs(
            a in proptest::array::uniform9(-1.0..1.0f64),
            b in proptest::array::uniform9(-1.0..1.0f64),
            scale_h in 0.5..40.0f64, scale_a in 0.5..160.0f64,
        ) {
            let la = Mat3::from_row_slice(&a);
            let lb = Mat3::from_row_slice(&b);
            let d_h = la * la.transpose() * scale_h + Mat3::identity() * 0.1;
            let d_a = lb * lb.transpose() * scale_a + Mat3::identity() * 0.1;
            let (ok, _) = damping_condition(&d_h, &d_a);
            let b6 = dissipation_matrix(&d_h, &d_a);
            let b_pd = linalg::min_eigenvalue6(&b6) > 0.0;
            prop_assert_eq!(ok, b_pd);
        }

        /// The cruise storage is nonnegative everywhere around the
        /// anchoring equilibrium.
        #[test]
        fn cruise_storage_is_nonnegative(
            px in -3.0..3.0f64, py in -3.0..3.0f64, pz in 0.1..4.0f64,
            vhx in -0.5..0.5f64, vhy in -0.5..0.5f64,
            vrx in -0.5..0.5f64, vry in -0.5..0.5f64, vrz in -0.5..0.5f64,
        ) {
            let p = params(15.0, 13.0);
            let gamma = Vec3::new(3.0, 0.0, 2.0);
            let (v_star, _) = steady_state_robot_state(
                &gamma, &p.human.damping, &p.admittance.damping).unwrap();
            let p_h = Vec3::new(0.0, 0.0, 1.0);
            let x = SystemState::new(
                p_h,
                Vec3::new(vhx, vhy, 0.0),
                p_h + Vec3::new(px, py, pz),
                Vec3::new(vrx, vry, vrz),
            );
            prop_assert!(lyapunov_constant_input(&x, &v_star, gamma.z, &p) >= -1e-12);
        }
    }
}
