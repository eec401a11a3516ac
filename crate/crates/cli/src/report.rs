//! Summary serialization: flat JSON objects and the sweep aggregate CSV.

use serde_json::{json, Map, Value};
use tether_guide::control::GuidanceLaw;
use tether_guide::stability::StabilityReport;
use tether_guide::trajectory::RunSummary;

/// Flat JSON object with run statistics followed by the stability report.
pub fn summary_json(
    name: &str,
    law: GuidanceLaw,
    summary: &RunSummary,
    report: &StabilityReport,
) -> Value {
    let mut m = Map::new();
    m.insert("name".into(), json!(name));
    m.insert("law".into(), json!(law.name()));
    m.insert("mean_force_error".into(), json!(summary.mean_force_error));
    m.insert("std_force_error".into(), json!(summary.std_force_error));
    m.insert("mean_speed".into(), json!(summary.mean_speed));
    m.insert("std_speed".into(), json!(summary.std_speed));
    m.insert("slack_fraction".into(), json!(summary.slack_fraction));
    m.insert("converged".into(), json!(summary.converged));
    m.insert("settle_time".into(), json!(summary.settle_time));
    append_report(&mut m, report);
    Value::Object(m)
}

pub fn report_json(report: &StabilityReport) -> Value {
    let mut m = Map::new();
    append_report(&mut m, report);
    Value::Object(m)
}

fn append_report(m: &mut Map<String, Value>, report: &StabilityReport) {
    m.insert("vertical_force_ok".into(), json!(report.vertical_force_ok));
    m.insert("vertical_force_margin".into(), json!(report.vertical_force_margin));
    m.insert("damping_ok".into(), json!(report.damping_ok));
    m.insert("damping_min_eig".into(), json!(report.damping_min_eig));
    if let Some(c) = report.scalar_damping {
        m.insert("scalar_damping_ok".into(), json!(c.ok));
        m.insert("scalar_damping_margin".into(), json!(c.margin));
        m.insert("scalar_damping_limit".into(), json!(c.limit));
    }
    for (name, v) in [
        ("v_ss_robot_state", &report.v_ss_robot_state),
        ("f_ss_robot_state", &report.f_ss_robot_state),
        ("v_ss_velocity_feedback", &report.v_ss_velocity_feedback),
        ("f_ss_velocity_feedback", &report.f_ss_velocity_feedback),
    ] {
        for (axis, c) in ["x", "y", "z"].iter().zip(v.iter()) {
            m.insert(format!("{name}_{axis}"), json!(c));
        }
    }
}

/// One aggregated sweep row.
pub struct SweepRow {
    pub name: String,
    pub law: GuidanceLaw,
    pub axis: String,
    pub value: f64,
    pub summary: Option<RunSummary>,
    pub scalar_damping_ok: Option<bool>,
    pub error: Option<String>,
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "name,law,axis,value,mean_force_error,std_force_error,mean_speed,std_speed,\
         slack_fraction,converged,settle_time,scalar_damping_ok,error\n",
    );
    for r in rows {
        let (me, se, ms, ss, sf, cv, st) = match &r.summary {
            Some(s) => (
                fmt(s.mean_force_error),
                fmt(s.std_force_error),
                fmt(s.mean_speed),
                fmt(s.std_speed),
                fmt(s.slack_fraction),
                s.converged.to_string(),
                s.settle_time.map_or(String::new(), fmt),
            ),
            None => Default::default(),
        };
        out.push_str(&format!(
            "{},{},{},{},{me},{se},{ms},{ss},{sf},{cv},{st},{},{}\n",
            r.name,
            r.law.name(),
            r.axis,
            fmt(r.value),
            r.scalar_damping_ok.map_or(String::new(), |b| b.to_string()),
            r.error.clone().unwrap_or_default(),
        ));
    }
    out
}

fn fmt(x: f64) -> String {
    format!("{x:.8e}")
}
