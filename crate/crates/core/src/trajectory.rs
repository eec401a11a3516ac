//! Trajectory logs, run statistics and CSV emission.

use crate::control::GuidanceLaw;
use crate::linalg::{self, Vec3};
use crate::model::SystemState;

/// Which storage function the simulator logs per sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LyapunovMode {
    /// Energy relative to the go-to-point equilibrium.
    Regulation,
    /// Energy in error coordinates around the constant-velocity trajectory
    /// of the saturated far-field regime.
    ConstantInput,
}

/// One logged simulation sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: SystemState,
    pub f_c: Vec3,
    pub tension: f64,
    pub u_a: Vec3,
    /// Saturated position-law command, the force the guidance wants the
    /// human to feel.
    pub guidance: Vec3,
    pub v_h_est: Vec3,
    pub u_h: Vec3,
    pub delta: Vec3,
    pub lyapunov: f64,
    pub slack: bool,
}

/// Fixed-rate record of a simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryLog {
    pub dt: f64,
    pub law: GuidanceLaw,
    pub lyapunov_mode: LyapunovMode,
    /// Steady-state velocity used to anchor the constant-input storage.
    pub v_star: Option<Vec3>,
    /// Constant guidance force assumed by the constant-input analysis.
    pub gamma_inf: Option<Vec3>,
    pub samples: Vec<Sample>,
}

impl TrajectoryLog {
    pub fn duration(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }

    /// Samples with `t >= from`.
    pub fn tail(&self, from: f64) -> &[Sample] {
        let start = self.samples.partition_point(|s| s.t < from);
        &self.samples[start..]
    }

    /// CSV rendering: one header row, one row per sample, vectors expanded
    /// to _x/_y/_z columns, floats printed with 9 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.samples.len() * 220 + 256);
        out.push_str(
            "t,p_h_x,p_h_y,p_h_z,v_h_x,v_h_y,v_h_z,p_r_x,p_r_y,p_r_z,v_r_x,v_r_y,v_r_z,\
             f_c_x,f_c_y,f_c_z,tension,u_a_x,u_a_y,u_a_z,guidance_x,guidance_y,guidance_z,\
             v_h_est_x,v_h_est_y,v_h_est_z,u_h_x,u_h_y,u_h_z,delta_x,delta_y,delta_z,\
             lyapunov,slack\n",
        );
        for s in &self.samples {
            let mut fields: Vec<String> = Vec::with_capacity(34);
            fields.push(fmt9(s.t));
            for v in [
                &s.state.p_h, &s.state.v_h, &s.state.p_r, &s.state.v_r, &s.f_c,
            ] {
                fields.extend(v.iter().map(|c| fmt9(*c)));
            }
            fields.push(fmt9(s.tension));
            for v in [&s.u_a, &s.guidance, &s.v_h_est, &s.u_h, &s.delta] {
                fields.extend(v.iter().map(|c| fmt9(*c)));
            }
            fields.push(fmt9(s.lyapunov));
            fields.push(if s.slack { "1".into() } else { "0".into() });
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

fn fmt9(x: f64) -> String {
    format!("{x:.8e}")
}

/// Statistics of one run.
///
/// Force and speed statistics are plain per-sample moments over the whole
/// log; the mean speed uses trapezoidal time averaging. `force_error` is
/// the horizontal gap between the guidance command and the cable force.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub mean_force_error: f64,
    pub std_force_error: f64,
    pub mean_speed: f64,
    pub std_speed: f64,
    pub slack_fraction: f64,
    pub converged: bool,
    pub settle_time: Option<f64>,
}

/// Horizontal force-tracking error of one sample.
pub fn force_error(s: &Sample) -> f64 {
    linalg::horizontal_norm(&(s.guidance - s.f_c))
}

/// Velocity change over a 1 s horizon stays below this for steady state.
pub const SETTLE_VELOCITY_TOL: f64 = 1e-4;
/// How long the steady condition must hold.
pub const SETTLE_HOLD: f64 = 2.0;

/// Reduces a log to its summary statistics.
pub fn summarize(log: &TrajectoryLog) -> RunSummary {
    let samples = &log.samples;
    assert!(!samples.is_empty(), "cannot summarize an empty log");

    let errors: Vec<f64> = samples.iter().map(force_error).collect();
    let speeds: Vec<f64> = samples.iter().map(|s| s.state.v_h.norm()).collect();

    let (mean_force_error, std_force_error) = moments(&errors);
    let mean_speed = trapezoid_mean(&speeds);
    let std_speed = {
        let var = speeds.iter().map(|v| (v - mean_speed).powi(2)).sum::<f64>()
            / speeds.len() as f64;
        var.sqrt()
    };

    let slack_count = samples.iter().filter(|s| s.slack).count();
    let slack_fraction = slack_count as f64 / samples.len() as f64;

    let settle_time = detect_settling(log);
    RunSummary {
        mean_force_error,
        std_force_error,
        mean_speed,
        std_speed,
        slack_fraction,
        converged: settle_time.is_some(),
        settle_time,
    }
}

fn moments(xs: &[f64]) -> (f64, f64) {
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
    (mean, var.sqrt())
}

fn trapezoid_mean(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => {
            let interior: f64 = xs[1..n - 1].iter().sum();
            (0.5 * (xs[0] + xs[n - 1]) + interior) / (n - 1) as f64
        }
    }
}

/// Earliest time from which the velocity change over a 1 s horizon stays
/// below [`SETTLE_VELOCITY_TOL`] for [`SETTLE_HOLD`] seconds.
fn detect_settling(log: &TrajectoryLog) -> Option<f64> {
    let n = log.samples.len();
    let lag = (1.0 / log.dt).round() as usize;
    let hold = (SETTLE_HOLD / log.dt).round() as usize;
    if lag == 0 || n <= lag + hold {
        return None;
    }
    let steady: Vec<bool> = (lag..n)
        .map(|k| {
            let now = &log.samples[k].state;
            let before = &log.samples[k - lag].state;
            (now.v_h - before.v_h).norm().max((now.v_r - before.v_r).norm())
                < SETTLE_VELOCITY_TOL
        })
        .collect();
    let mut run = 0usize;
    for (i, ok) in steady.iter().enumerate() {
        if *ok {
            run += 1;
            if run >= hold + 1 {
                return Some(log.samples[lag + i - run + 1].t);
            }
        } else {
            run = 0;
        }
    }
    None
}
