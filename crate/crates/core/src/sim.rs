//! Deterministic fixed-step simulation of the closed loop.
//!
//! Classical fourth-order integration with the control held constant over
//! each step (the admittance loop runs at a finite rate) and the human
//! re-projected onto the ground plane after every step. Identical
//! configurations, including the seed, produce bit-identical logs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::control::{self, GuidanceConfig, GuidanceLaw};
use crate::error::{Error, Result};
use crate::linalg::{self, Vec3};
use crate::model::{
    cable_force, state_derivative, ExogenousInputs, ModelParams, StateDerivative, SystemState,
};
use crate::savgol::SavitzkyGolay;
use crate::stability;
use crate::trajectory::{LyapunovMode, Sample, TrajectoryLog};

/// Any state component beyond this magnitude aborts the run.
pub const BLOWUP_LIMIT: f64 = 1e6;

/// Where the guidance law reads the human velocity from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VelocitySource {
    /// The simulator's exact state.
    TrueState,
    /// Causal Savitzky-Golay differentiation of the logged positions.
    SavitzkyGolay,
}

/// Sinusoidal human force imitating the oscillation of a walking gait.
#[derive(Debug, Clone, PartialEq)]
pub struct GaitConfig {
    pub amplitude: f64,
    pub frequency: f64,
    /// Direction of the oscillation; only its horizontal part acts.
    pub axis: Vec3,
}

/// Robot-side tracking-error force profile.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum DeltaProfile {
    #[default]
    None,
    Constant(Vec3),
    Sinusoid { amplitude: f64, frequency: f64, axis: Vec3 },
    /// Uniform noise in [-amplitude, amplitude] per axis, drawn from the
    /// seeded generator.
    Noise { amplitude: f64 },
}

/// Full configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub duration: f64,
    pub x0: SystemState,
    pub guidance: GuidanceConfig,
    pub velocity_source: VelocitySource,
    pub sg_window: usize,
    pub sg_poly_order: usize,
    pub gait: Option<GaitConfig>,
    pub delta_profile: DeltaProfile,
    /// Norm bound on the injected human force.
    pub u_h_bound: f64,
    /// Norm bound on the injected tracking-error force.
    pub delta_bound: f64,
    pub seed: u64,
    pub lyapunov_mode: LyapunovMode,
}

impl SimConfig {
    /// A run with the common defaults: 1 ms steps, estimator-fed velocity
    /// feedback, no disturbances.
    pub fn new(x0: SystemState, guidance: GuidanceConfig, duration: f64) -> Self {
        Self {
            dt: 1e-3,
            duration,
            x0,
            guidance,
            velocity_source: VelocitySource::SavitzkyGolay,
            sg_window: 11,
            sg_poly_order: 3,
            gait: None,
            delta_profile: DeltaProfile::None,
            u_h_bound: 50.0,
            delta_bound: 10.0,
            seed: 0,
            lyapunov_mode: LyapunovMode::Regulation,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter("dt must be positive".into()));
        }
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return Err(Error::InvalidParameter("duration must be nonnegative".into()));
        }
        if !self.x0.is_finite() {
            return Err(Error::InvalidParameter("initial state must be finite".into()));
        }
        Ok(())
    }
}

/// One integration step with the given inputs held constant.
///
/// `t` only labels errors; the dynamics are time-invariant within a step.
pub fn rk4_step(
    x: &SystemState,
    t: f64,
    dt: f64,
    u_a: &Vec3,
    exo: &ExogenousInputs,
    params: &ModelParams,
) -> Result<SystemState> {
    let k1 = state_derivative(x, u_a, exo, params)?;
    let k2 = state_derivative(&advance(x, &k1, 0.5 * dt), u_a, exo, params)?;
    let k3 = state_derivative(&advance(x, &k2, 0.5 * dt), u_a, exo, params)?;
    let k4 = state_derivative(&advance(x, &k3, dt), u_a, exo, params)?;

    let sixth = dt / 6.0;
    let mut next = SystemState {
        p_h: x.p_h + (k1.v_h + 2.0 * (k2.v_h + k3.v_h) + k4.v_h) * sixth,
        v_h: x.v_h + (k1.a_h + 2.0 * (k2.a_h + k3.a_h) + k4.a_h) * sixth,
        p_r: x.p_r + (k1.v_r + 2.0 * (k2.v_r + k3.v_r) + k4.v_r) * sixth,
        v_r: x.v_r + (k1.a_r + 2.0 * (k2.a_r + k3.a_r) + k4.a_r) * sixth,
    };
    next.project_to_ground(params.human.handle_height);

    let amax = next.amax();
    if !amax.is_finite() || amax > BLOWUP_LIMIT {
        return Err(Error::NumericalBlowup { t, component: "state", value: amax });
    }
    Ok(next)
}

fn advance(x: &SystemState, k: &StateDerivative, h: f64) -> SystemState {
    SystemState {
        p_h: x.p_h + k.v_h * h,
        v_h: x.v_h + k.a_h * h,
        p_r: x.p_r + k.v_r * h,
        v_r: x.v_r + k.a_r * h,
    }
}

/// A run that stopped early; the log holds everything up to the failure.
#[derive(Debug, Clone)]
pub struct SimAbort {
    pub log: TrajectoryLog,
    pub error: Error,
}

impl std::fmt::Display for SimAbort {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "simulation aborted at t = {:.3} s: {}", self.log.duration(), self.error)
    }
}

impl std::error::Error for SimAbort {}

/// Integrates the closed loop and logs every sample.
///
/// Stability preconditions are not required; unstable configurations are
/// legitimate experiments and end either normally or with an abort.
pub fn run(cfg: &SimConfig, params: &ModelParams) -> std::result::Result<TrajectoryLog, Box<SimAbort>> {
    let make_abort = |samples: Vec<Sample>, meta: &LogMeta, error: Error| {
        Box::new(SimAbort { log: meta.build(samples), error })
    };

    let meta = match prepare(cfg, params) {
        Ok(meta) => meta,
        Err(e) => return Err(make_abort(Vec::new(), &LogMeta::bare(cfg), e)),
    };

    let steps = step_count(cfg.duration, cfg.dt);
    let mut samples = Vec::with_capacity(steps + 1);
    let mut x = cfg.x0;
    x.project_to_ground(params.human.handle_height);
    let mut positions: Vec<Vec3> = Vec::with_capacity(steps + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    for k in 0..=steps {
        let t = k as f64 * cfg.dt;
        positions.push(x.p_h);

        let v_h_est = match cfg.velocity_source {
            VelocitySource::TrueState => x.v_h,
            VelocitySource::SavitzkyGolay => meta.estimator.estimate(&positions, cfg.dt),
        };
        // The law sees the estimate; the plant keeps the true state.
        let mut x_ctrl = x;
        x_ctrl.v_h = v_h_est;
        let ctrl = control::guidance(&x_ctrl, &cfg.guidance, &params.admittance, &params.cable);

        let exo = ExogenousInputs::clamped(
            gait_force(cfg, t),
            cfg.u_h_bound,
            delta_force(&cfg.delta_profile, t, &mut rng),
            cfg.delta_bound,
        );

        let cable = cable_force(&x.p_h, &x.p_r, &params.cable);
        let lyapunov = match cfg.lyapunov_mode {
            LyapunovMode::Regulation => stability::lyapunov_regulation(&x, &cfg.guidance, params),
            LyapunovMode::ConstantInput => stability::lyapunov_constant_input(
                &x,
                &meta.v_star.unwrap_or_else(Vec3::zeros),
                meta.gamma_inf.map_or(0.0, |g| g.z),
                params,
            ),
        };

        samples.push(Sample {
            t,
            state: x,
            f_c: cable.force,
            tension: cable.tension,
            u_a: ctrl.u_a,
            guidance: ctrl.guidance,
            v_h_est,
            u_h: exo.u_h,
            delta: exo.delta,
            lyapunov,
            slack: cable.tension == 0.0,
        });

        if k < steps {
            match rk4_step(&x, t, cfg.dt, &ctrl.u_a, &exo, params) {
                Ok(next) => x = next,
                Err(e) => return Err(make_abort(samples, &meta, e)),
            }
        }
    }

    Ok(meta.build(samples))
}

struct LogMeta {
    dt: f64,
    law: GuidanceLaw,
    lyapunov_mode: LyapunovMode,
    v_star: Option<Vec3>,
    gamma_inf: Option<Vec3>,
    estimator: SavitzkyGolay,
}

impl LogMeta {
    fn bare(cfg: &SimConfig) -> Self {
        Self {
            dt: cfg.dt,
            law: cfg.guidance.law,
            lyapunov_mode: cfg.lyapunov_mode,
            v_star: None,
            gamma_inf: None,
            // Window parameters already vetted wherever this is reachable.
            estimator: SavitzkyGolay::new(11, 3).expect("default estimator"),
        }
    }

    fn build(&self, samples: Vec<Sample>) -> TrajectoryLog {
        TrajectoryLog {
            dt: self.dt,
            law: self.law,
            lyapunov_mode: self.lyapunov_mode,
            v_star: self.v_star,
            gamma_inf: self.gamma_inf,
            samples,
        }
    }
}

fn prepare(cfg: &SimConfig, params: &ModelParams) -> Result<LogMeta> {
    cfg.validate()?;
    let estimator = SavitzkyGolay::new(cfg.sg_window, cfg.sg_poly_order)?;

    let (v_star, gamma_inf) = if cfg.lyapunov_mode == LyapunovMode::ConstantInput {
        let gamma = far_field_gamma(&cfg.x0, &cfg.guidance, params);
        let v_star = match cfg.guidance.law {
            GuidanceLaw::RobotState => stability::steady_state_robot_state(
                &gamma,
                &params.human.damping,
                &params.admittance.damping,
            )?
            .0,
            GuidanceLaw::VelocityFeedback => {
                stability::steady_state_velocity_feedback(&gamma, &params.human.damping)?.0
            }
        };
        (Some(v_star), Some(gamma))
    } else {
        (None, None)
    };

    Ok(LogMeta {
        dt: cfg.dt,
        law: cfg.guidance.law,
        lyapunov_mode: cfg.lyapunov_mode,
        v_star,
        gamma_inf,
        estimator,
    })
}

/// Guidance force the far-field analysis treats as constant: the saturated
/// position command evaluated at the given state.
pub fn far_field_gamma(x: &SystemState, cfg: &GuidanceConfig, params: &ModelParams) -> Vec3 {
    control::robot_state_guidance(x, cfg, &params.cable).u_a
}

fn gait_force(cfg: &SimConfig, t: f64) -> Vec3 {
    match &cfg.gait {
        Some(g) => {
            linalg::horizontal(&g.axis)
                * (g.amplitude * (2.0 * std::f64::consts::PI * g.frequency * t).sin())
        }
        None => Vec3::zeros(),
    }
}

fn delta_force(profile: &DeltaProfile, t: f64, rng: &mut ChaCha8Rng) -> Vec3 {
    match profile {
        DeltaProfile::None => Vec3::zeros(),
        DeltaProfile::Constant(v) => *v,
        DeltaProfile::Sinusoid { amplitude, frequency, axis } => {
            axis * (amplitude * (2.0 * std::f64::consts::PI * frequency * t).sin())
        }
        DeltaProfile::Noise { amplitude } => Vec3::new(
            rng.gen_range(-1.0..=1.0) * amplitude,
            rng.gen_range(-1.0..=1.0) * amplitude,
            rng.gen_range(-1.0..=1.0) * amplitude,
        ),
    }
}

fn step_count(duration: f64, dt: f64) -> usize {
    let ratio = duration / dt;
    if (ratio - ratio.round()).abs() < 1e-9 {
        ratio.round() as usize
    } else {
        ratio.ceil() as usize
    }
}

/// How a scenario's initial state is constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartMode {
    /// Both bodies at rest, cable hanging exactly taut above the human.
    Rest,
    /// Both bodies at the active law's predicted cruise velocity with the
    /// cable stretched to carry the predicted steady force.
    Cruise,
    /// Cruise velocities but a slightly slack cable, the posture at the
    /// start of a stop-and-go cycle.
    SlackCruise,
}

/// Builds the initial state for a far-field scenario: the human starts
/// `distance` meters before the target along the x axis.
pub fn initial_state(
    mode: StartMode,
    distance: f64,
    cfg: &GuidanceConfig,
    params: &ModelParams,
) -> Result<SystemState> {
    let p_h = cfg.target - Vec3::new(distance, 0.0, 0.0);
    let rest = SystemState::new(
        p_h,
        Vec3::zeros(),
        p_h + Vec3::new(0.0, 0.0, params.cable.rest_length),
        Vec3::zeros(),
    );
    match mode {
        StartMode::Rest => Ok(rest),
        StartMode::Cruise | StartMode::SlackCruise => {
            let gamma = far_field_gamma(&rest, cfg, params);
            let (v_star, f_ss) = match cfg.law {
                GuidanceLaw::RobotState => stability::steady_state_robot_state(
                    &gamma,
                    &params.human.damping,
                    &params.admittance.damping,
                )?,
                GuidanceLaw::VelocityFeedback => {
                    stability::steady_state_velocity_feedback(&gamma, &params.human.damping)?
                }
            };
            if f_ss.norm() == 0.0 {
                return Err(Error::DegenerateReference);
            }
            let dir = f_ss / f_ss.norm();
            let length = match mode {
                StartMode::Cruise => {
                    params.cable.rest_length + f_ss.norm() / params.cable.stiffness
                }
                _ => 0.99 * params.cable.rest_length,
            };
            Ok(SystemState::new(p_h, v_star, p_h + dir * length, v_star))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat3;
    use crate::model::{AdmittanceParams, CableParams, HumanParams};
    use crate::trajectory::summarize;
    use approx::assert_relative_eq;

    fn params(d_h: f64, d_a: f64) -> ModelParams {
        ModelParams {
            human: HumanParams::isotropic(70.0, d_h).unwrap(),
            admittance: AdmittanceParams::isotropic(5.0, d_a).unwrap(),
            cable: CableParams::new(1.5, 100.0).unwrap(),
        }
    }

    fn guidance_config(law: GuidanceLaw, p: &ModelParams, k_p: f64, sat: f64) -> GuidanceConfig {
        GuidanceConfig::new(law, k_p, 2.0, Vec3::new(10.0, 0.0, 1.0), sat, &p.human).unwrap()
    }

    fn equilibrium(cfg: &GuidanceConfig, p: &ModelParams) -> SystemState {
        let f_r = cfg.force_reference();
        let p_r_ref =
            cfg.target + f_r * (1.0 / p.cable.stiffness + p.cable.rest_length / f_r.norm());
        SystemState::new(cfg.target, Vec3::zeros(), p_r_ref, Vec3::zeros())
    }

    #[test]
    fn equilibrium_is_a_fixed_point_of_the_integrator() {
        let p = params(30.0, 100.0);
        let cfg = guidance_config(GuidanceLaw::VelocityFeedback, &p, 1.0, 3.0);
        let x_e = equilibrium(&cfg, &p);
        let ctrl = control::guidance(&x_e, &cfg, &p.admittance, &p.cable);
        let next =
            rk4_step(&x_e, 0.0, 1e-3, &ctrl.u_a, &ExogenousInputs::default(), &p).unwrap();
        assert!((next.p_h - x_e.p_h).norm() < 1e-12);
        assert!((next.p_r - x_e.p_r).norm() < 1e-12);
        assert!(next.v_h.norm() < 1e-12);
        assert!(next.v_r.norm() < 1e-12);
    }

    #[test]
    fn one_step_matches_the_taylor_expansion() {
        let p = params(30.0, 100.0);
        // Taut cable pulling the human forward from rest, constant input.
        let f = Vec3::new(3.0, 0.0, 2.0);
        let dir = f / f.norm();
        let len = p.cable.rest_length + f.norm() / p.cable.stiffness;
        let p_h = Vec3::new(0.0, 0.0, 1.0);
        let x = SystemState::new(p_h, Vec3::zeros(), p_h + dir * len, Vec3::zeros());
        let u_a = Vec3::new(1.0, 0.0, 2.0);

        let dt = 1e-3;
        let next = rk4_step(&x, 0.0, dt, &u_a, &ExogenousInputs::default(), &p).unwrap();

        let dx = state_derivative(&x, &u_a, &ExogenousInputs::default(), &p).unwrap();
        // Positions follow a = const to second order; the remainder is the
        // jerk term, bounded well below 10 * dt^3 here.
        let predicted = x.p_h + dx.a_h * (0.5 * dt * dt);
        assert!((next.p_h - predicted).norm() < 10.0 * dt * dt * dt);
        let predicted_r = x.p_r + dx.a_r * (0.5 * dt * dt);
        assert!((next.p_r - predicted_r).norm() < 10.0 * dt * dt * dt);
    }

    #[test]
    fn integrator_converges_at_fourth_order() {
        let p = params(30.0, 100.0);
        let cfg = guidance_config(GuidanceLaw::VelocityFeedback, &p, 3.0, 3.0);
        let x0 = initial_state(StartMode::Cruise, 10.0, &cfg, &p).unwrap();

        let final_state = |dt: f64| -> SystemState {
            let mut x = x0;
            let mut t = 0.0;
            let n = (0.1 / dt).round() as usize;
            for _ in 0..n {
                // Frozen control isolates the integrator's own order.
                let u_a = Vec3::new(3.0, 0.0, 2.0);
                x = rk4_step(&x, t, dt, &u_a, &ExogenousInputs::default(), &p).unwrap();
                t += dt;
            }
            x
        };

        let reference = final_state(1e-3 / 16.0);
        let err = |x: &SystemState| {
            (x.p_h - reference.p_h)
                .norm()
                .max((x.p_r - reference.p_r).norm())
                .max((x.v_h - reference.v_h).norm())
                .max((x.v_r - reference.v_r).norm())
        };
        let e1 = err(&final_state(1e-3));
        let e2 = err(&final_state(5e-4));
        assert!(
            e1 / e2 > 10.0,
            "expected at least fourth-order decay, got ratio {:.2} (e1={e1:.3e}, e2={e2:.3e})",
            e1 / e2
        );
    }

    #[test]
    fn zero_duration_yields_a_single_sample() {
        let p = params(30.0, 100.0);
        let cfg = guidance_config(GuidanceLaw::RobotState, &p, 1.0, 3.0);
        let x0 = initial_state(StartMode::Rest, 10.0, &cfg, &p).unwrap();
        let log = run(&SimConfig::new(x0, cfg, 0.0), &p).unwrap();
        assert_eq!(log.samples.len(), 1);
        assert_eq!(log.samples[0].t, 0.0);
    }

    #[test]
    fn runs_are_bit_identical() {
        let p = params(15.0, 13.0);
        let cfg = guidance_config(GuidanceLaw::RobotState, &p, 3.0, 3.0);
        let x0 = initial_state(StartMode::SlackCruise, 10.0, &cfg, &p).unwrap();
        let mut sim = SimConfig::new(x0, cfg, 2.0);
        sim.delta_profile = DeltaProfile::Noise { amplitude: 0.2 };
        sim.seed = 42;
        let a = run(&sim, &p).unwrap();
        let b = run(&sim, &p).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn ground_constraint_holds_along_the_run() {
        let p = params(30.0, 100.0);
        let cfg = guidance_config(GuidanceLaw::VelocityFeedback, &p, 3.0, 3.0);
        let x0 = initial_state(StartMode::Rest, 10.0, &cfg, &p).unwrap();
        let log = run(&SimConfig::new(x0, cfg, 5.0), &p).unwrap();
        for s in &log.samples {
            assert!(s.state.v_h.z.abs() <= 1e-9);
            assert_relative_eq!(s.state.p_h.z, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn slack_flag_tracks_the_cable_length() {
        let p = params(15.0, 13.0);
        let cfg = guidance_config(GuidanceLaw::RobotState, &p, 3.0, 3.0);
        let x0 = initial_state(StartMode::SlackCruise, 10.0, &cfg, &p).unwrap();
        let log = run(&SimConfig::new(x0, cfg, 10.0), &p).unwrap();
        let mut saw_slack = false;
        let mut saw_taut = false;
        for s in &log.samples {
            let len = (s.state.p_r - s.state.p_h).norm();
            assert_eq!(s.slack, len <= p.cable.rest_length, "at t = {}", s.t);
            saw_slack |= s.slack;
            saw_taut |= !s.slack;
        }
        assert!(saw_slack && saw_taut, "scenario should cross the taut boundary");
    }

    #[test]
    fn estimator_tracks_the_true_velocity_after_warmup() {
        let p = params(30.0, 100.0);
        let cfg = guidance_config(GuidanceLaw::VelocityFeedback, &p, 3.0, 3.0);
        let x0 = initial_state(StartMode::Cruise, 10.0, &cfg, &p).unwrap();
        let log = run(&SimConfig::new(x0, cfg, 5.0), &p).unwrap();
        let warmup = 11;
        for s in &log.samples[warmup..] {
            assert!(
                (s.v_h_est - s.state.v_h).norm() <= 1e-3,
                "estimator error {} at t = {}",
                (s.v_h_est - s.state.v_h).norm(),
                s.t
            );
        }
    }

    #[test]
    fn damping_beyond_the_stable_step_range_aborts_with_partial_log() {
        // The x damping mode has |lambda| dt = 10, far outside the stable
        // region of the fixed-step scheme, so the robot velocity diverges.
        let p = ModelParams {
            human: HumanParams::isotropic(70.0, 30.0).unwrap(),
            admittance: AdmittanceParams::new(
                Mat3::identity() * 5.0,
                Mat3::from_diagonal(&Vec3::new(5e4, 13.0, 13.0)),
            )
            .unwrap(),
            cable: CableParams::new(1.5, 100.0).unwrap(),
        };
        let cfg = guidance_config(GuidanceLaw::RobotState, &p, 3.0, 3.0);
        let p_h = Vec3::new(0.0, 0.0, 1.0);
        // Slack cable overhead; the divergence needs no cable coupling.
        let x0 = SystemState::new(p_h, Vec3::zeros(), p_h + Vec3::new(0.0, 0.0, 1.0), Vec3::zeros());
        let abort = run(&SimConfig::new(x0, cfg, 5.0), &p).unwrap_err();
        assert!(matches!(abort.error, Error::NumericalBlowup { .. }));
        assert!(!abort.log.samples.is_empty());
        assert!(abort.log.duration() < 5.0);
    }

    #[test]
    fn overhead_robot_pulling_too_hard_lifts_the_human_off() {
        let p = params(30.0, 100.0);
        let cfg = guidance_config(GuidanceLaw::RobotState, &p, 1.0, 3.0);
        // Cable stretched vertically far past the human's weight.
        let p_h = Vec3::new(0.0, 0.0, 1.0);
        let x0 = SystemState::new(
            p_h,
            Vec3::zeros(),
            p_h + Vec3::new(0.0, 0.0, p.cable.rest_length + 8.0),
            Vec3::zeros(),
        );
        let abort = run(&SimConfig::new(x0, cfg, 1.0), &p).unwrap_err();
        assert!(matches!(abort.error, Error::Liftoff { .. }));
        assert_eq!(abort.log.samples.len(), 1);
    }

    #[test]
    fn cruise_start_is_near_steady_state_from_the_first_sample() {
        let p = params(15.0, 13.0);
        let cfg = guidance_config(GuidanceLaw::RobotState, &p, 3.0, 3.0);
        let x0 = initial_state(StartMode::Cruise, 10.0, &cfg, &p).unwrap();
        let mut sim = SimConfig::new(x0, cfg, 20.0);
        sim.lyapunov_mode = LyapunovMode::ConstantInput;
        let log = run(&sim, &p).unwrap();
        let summary = summarize(&log);
        // Horizontal deficit 13 * 3 / 28 from the first sample onward.
        assert_relative_eq!(summary.mean_force_error, 3.0 * 13.0 / 28.0, epsilon = 1e-3);
        assert!(summary.slack_fraction == 0.0);
    }

    #[test]
    fn energy_dissipates_without_inputs() {
        let p = params(30.0, 100.0);
        // Free system: no control, taut cable, gentle initial motion so the
        // cable never goes slack and the energy stays smooth.
        let f = Vec3::new(4.0, 0.0, 2.0);
        let dir = f / f.norm();
        let len = p.cable.rest_length + f.norm() / p.cable.stiffness;
        let p_h = Vec3::new(0.0, 0.0, 1.0);
        let mut x = SystemState::new(
            p_h,
            Vec3::new(0.05, -0.02, 0.0),
            p_h + dir * len,
            Vec3::new(-0.02, 0.01, 0.02),
        );

        let dt = 1e-3;
        let mut energies = Vec::new();
        let mut rates = Vec::new();
        for k in 0..400 {
            energies.push(crate::model::mechanical_energy(&x, &p));
            rates.push(
                -(x.v_h.dot(&(p.human.damping * x.v_h))
                    + x.v_r.dot(&(p.admittance.damping * x.v_r))),
            );
            x = rk4_step(&x, k as f64 * dt, dt, &Vec3::zeros(), &ExogenousInputs::default(), &p)
                .unwrap();
        }
        // Fourth-order stencil so the differencing error stays below the
        // 1e-6 relative tolerance at this step size.
        let scale = rates.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
        for k in 2..energies.len() - 2 {
            let fd = (-energies[k + 2] + 8.0 * energies[k + 1] - 8.0 * energies[k - 1]
                + energies[k - 2])
                / (12.0 * dt);
            assert!(
                (fd - rates[k]).abs() <= 1e-6 * scale,
                "energy rate mismatch at step {k}: fd={fd:.9}, analytic={:.9}",
                rates[k]
            );
            assert!(rates[k] <= 0.0);
        }
    }
}
