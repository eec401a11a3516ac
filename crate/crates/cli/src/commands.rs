//! Subcommand implementations.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use tether_guide::sim::{self, far_field_gamma};
use tether_guide::stability::StabilityReport;
use tether_guide::trajectory::{force_error, summarize, TrajectoryLog};

use crate::config::{BuiltScenario, Scenario, SweepSpec};
use crate::error::{CliError, EXIT_ABORT, EXIT_OK};
use crate::report::{report_json, summary_json, sweep_csv, SweepRow};
use crate::svg::{self, Series};

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn evaluate_report(built: &BuiltScenario) -> Result<StabilityReport, CliError> {
    let gamma = far_field_gamma(&built.sim.x0, &built.guidance, &built.params);
    StabilityReport::evaluate(&built.guidance, &built.params, &gamma)
        .map_err(|e| CliError::Validation(e.to_string()))
}

fn run_figure(name: &str, log: &TrajectoryLog) -> String {
    let error_series = Series {
        label: "force error".into(),
        color: svg::COLORS[0],
        points: log.samples.iter().map(|s| (s.t, force_error(s))).collect(),
    };
    let speed_series = Series {
        label: "human speed".into(),
        color: svg::COLORS[1],
        points: log.samples.iter().map(|s| (s.t, s.state.v_h.norm())).collect(),
    };
    svg::time_panels(
        name,
        "time [s]",
        &[
            ("force error [N]".into(), vec![error_series]),
            ("human speed [m/s]".into(), vec![speed_series]),
        ],
    )
}

/// Runs one scenario and writes `<name>.csv`, `<name>.summary.json` and
/// `<name>.svg` into `out_dir`. Returns the process exit code.
pub fn cmd_run(scenario: &Scenario, out_dir: &Path) -> Result<i32, CliError> {
    let built = scenario.build()?;
    let report = evaluate_report(&built)?;

    let csv_path = out_dir.join(format!("{}.csv", built.name));
    match sim::run(&built.sim, &built.params) {
        Ok(log) => {
            write(&csv_path, &log.to_csv())?;
            let summary = summarize(&log);
            let json = summary_json(&built.name, built.guidance.law, &summary, &report);
            write(
                &out_dir.join(format!("{}.summary.json", built.name)),
                &format!("{:#}\n", json),
            )?;
            write(&out_dir.join(format!("{}.svg", built.name)), &run_figure(&built.name, &log))?;
            println!(
                "{}: {} samples, mean force error {:.4} N, mean speed {:.4} m/s -> {}",
                built.name,
                log.samples.len(),
                summary.mean_force_error,
                summary.mean_speed,
                out_dir.display()
            );
            Ok(EXIT_OK)
        }
        Err(abort) => {
            write(&csv_path, &abort.log.to_csv())?;
            eprintln!(
                "{}: aborted at t = {:.3} s: {} (partial log written to {})",
                built.name,
                abort.log.duration(),
                abort.error,
                csv_path.display()
            );
            Ok(EXIT_ABORT)
        }
    }
}

/// Runs every (value, law) grid point, writes the aggregate summary CSV and
/// the scatter figure. Partial results are written even when runs abort.
pub fn cmd_sweep(spec: &SweepSpec, out_dir: &Path, jobs: Option<usize>) -> Result<i32, CliError> {
    spec.validate()?;
    let grid: Vec<(usize, Scenario)> = spec
        .sweep
        .laws
        .iter()
        .flat_map(|law| spec.sweep.values.iter().map(move |v| (law, *v)))
        .enumerate()
        .map(|(i, (law, v))| (i, spec.grid_scenario(law, v)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Validation(format!("cannot build worker pool: {e}")))?;

    let mut results: Vec<(usize, SweepRow)> = pool.install(|| {
        grid.par_iter()
            .map(|(i, scenario)| {
                let row = run_grid_point(scenario, &spec.sweep.axis);
                (*i, row)
            })
            .collect()
    });
    results.sort_by_key(|(i, _)| *i);
    let rows: Vec<SweepRow> = results.into_iter().map(|(_, r)| r).collect();

    write(&out_dir.join(format!("{}.summary.csv", spec.sweep.name)), &sweep_csv(&rows))?;

    let mut series = Vec::new();
    for (k, law) in spec.sweep.laws.iter().enumerate() {
        let law: tether_guide::control::GuidanceLaw = law.law.into();
        let points: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.law == law && r.summary.is_some())
            .map(|r| {
                let s = r.summary.as_ref().unwrap();
                (s.mean_speed, s.mean_force_error)
            })
            .collect();
        series.push(Series {
            label: law.name().replace('_', " "),
            color: svg::COLORS[k % svg::COLORS.len()],
            points,
        });
    }
    write(
        &out_dir.join(format!("{}.svg", spec.sweep.name)),
        &svg::scatter_with_fits(
            &spec.sweep.name,
            "mean human speed [m/s]",
            "mean force error [N]",
            &series,
        ),
    )?;

    let mut failed = 0;
    for r in &rows {
        match (&r.summary, &r.error) {
            (Some(s), _) => println!(
                "{}: v = {:.4} m/s, force error {:.4} N, std speed {:.5}",
                r.name, s.mean_speed, s.mean_force_error, s.std_speed
            ),
            (None, Some(e)) => {
                failed += 1;
                eprintln!("{}: aborted: {e}", r.name);
            }
            _ => unreachable!(),
        }
    }
    println!("sweep '{}' -> {}", spec.sweep.name, out_dir.display());
    Ok(if failed == 0 { EXIT_OK } else { EXIT_ABORT })
}

fn run_grid_point(scenario: &Scenario, axis: &str) -> SweepRow {
    let axis_value = |s: &Scenario| match axis {
        "human.damping" => match &s.human.damping {
            crate::config::MatrixSpec::Scalar(v) => *v,
            _ => f64::NAN,
        },
        "admittance.damping" => match &s.admittance.damping {
            crate::config::MatrixSpec::Scalar(v) => *v,
            _ => f64::NAN,
        },
        "cable.stiffness" => s.cable.stiffness,
        "guidance.vertical_force" => s.guidance.vertical_force,
        _ => f64::NAN,
    };

    let built = match scenario.build() {
        Ok(b) => b,
        Err(e) => {
            return SweepRow {
                name: scenario.name.clone(),
                law: scenario.guidance.law.into(),
                axis: axis.to_string(),
                value: axis_value(scenario),
                summary: None,
                scalar_damping_ok: None,
                error: Some(e.to_string()),
            }
        }
    };
    let report = evaluate_report(&built).ok();
    let (summary, error) = match sim::run(&built.sim, &built.params) {
        Ok(log) => (Some(summarize(&log)), None),
        Err(abort) => (None, Some(abort.error.to_string())),
    };
    SweepRow {
        name: built.name,
        law: built.guidance.law,
        axis: axis.to_string(),
        value: axis_value(scenario),
        summary,
        scalar_damping_ok: report.and_then(|r| r.scalar_damping.map(|c| c.ok)),
        error,
    }
}

/// Prints the stability report for a scenario, human-readable then JSON.
/// Exit code 0 only when every applicable condition holds.
pub fn cmd_check(scenario: &Scenario) -> Result<i32, CliError> {
    let built = scenario.build()?;
    let report = evaluate_report(&built)?;
    println!("scenario: {}", built.name);
    println!("{}", report.to_text());
    println!("{:#}", report_json(&report));
    Ok(if report.all_ok() { EXIT_OK } else { 1 })
}

/// Runs a scenario and returns the full log; aborts become errors.
pub fn run_scenario(scenario: &Scenario) -> Result<TrajectoryLog, CliError> {
    let built = scenario.build()?;
    sim::run(&built.sim, &built.params)
        .map_err(|abort| CliError::Validation(format!("simulation aborted: {}", abort.error)))
}
