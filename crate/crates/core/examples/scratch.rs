use tether_guide::control::{GuidanceConfig, GuidanceLaw};
use tether_guide::linalg::Vec3;
use tether_guide::model::*;
use tether_guide::sim::*;
use tether_guide::trajectory::summarize;
use tether_guide::trajectory::LyapunovMode;

fn params(d_h: f64, d_a: f64) -> ModelParams {
    ModelParams {
        human: HumanParams::isotropic(70.0, d_h).unwrap(),
        admittance: AdmittanceParams::isotropic(5.0, d_a).unwrap(),
        cable: CableParams::new(1.5, 100.0).unwrap(),
    }
}

fn cruise_cfg(law: GuidanceLaw, p: &ModelParams) -> GuidanceConfig {
    GuidanceConfig::new(law, 3.0, 2.0, Vec3::new(10.0, 0.0, 1.0), 3.0, &p.human).unwrap()
}

fn main() {
    for freq in [0.9, 1.1, 1.3] {
        for gait_amp in [10.0, 15.0] {
            for delta_amp in [0.0] {
                println!("--- freq={freq} gait={gait_amp} delta={delta_amp}");
                let mut rows = Vec::new();
                for d_h in [40.0, 30.0, 15.0] {
                    let mut row = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
                    for (i, (law, pa)) in
                        [(GuidanceLaw::RobotState, 13.0), (GuidanceLaw::VelocityFeedback, 100.0)]
                            .into_iter()
                            .enumerate()
                    {
                        let p = params(d_h, pa);
                        let cfg = cruise_cfg(law, &p);
                        let x0 = initial_state(StartMode::Cruise, 10.0, &cfg, &p).unwrap();
                        let mut sim = SimConfig::new(x0, cfg, 35.0);
                        sim.lyapunov_mode = LyapunovMode::ConstantInput;
                        if gait_amp > 0.0 {
                            sim.gait = Some(GaitConfig {
                                amplitude: gait_amp,
                                frequency: freq,
                                axis: Vec3::new(1.0, 0.0, 0.0),
                            });
                        }
                        if delta_amp > 0.0 {
                            sim.delta_profile = DeltaProfile::Sinusoid {
                                amplitude: delta_amp,
                                frequency: freq,
                                axis: Vec3::new(1.0, 0.0, 0.0),
                            };
                        }
                        let log = run(&sim, &p).unwrap();
                        let s = summarize(&log);
                        if i == 0 {
                            row.0 = s.mean_force_error;
                            row.1 = s.mean_speed;
                            row.2 = s.std_speed;
                            row.3 = s.slack_fraction;
                        } else {
                            row.4 = s.mean_force_error;
                            row.5 = s.mean_speed;
                            row.6 = s.std_speed;
                            row.7 = s.slack_fraction;
                        }
                    }
                    rows.push((d_h, row));
                }
                for (d_h, r) in &rows {
                    println!(
                        "  d_h={d_h}: RS err={:.4} v={:.4} std={:.5} slack={:.3} | VF err={:.4} v={:.4} std={:.5} slack={:.3}",
                        r.0, r.1, r.2, r.3, r.4, r.5, r.6, r.7
                    );
                }
                let rs_errs: Vec<f64> = rows.iter().map(|(_, r)| r.0).collect();
                let rs_v: Vec<f64> = rows.iter().map(|(_, r)| r.1).collect();
                let vf_errs: Vec<f64> = rows.iter().map(|(_, r)| r.4).collect();
                let vf_v: Vec<f64> = rows.iter().map(|(_, r)| r.5).collect();
                let increasing = rs_errs[2] > rs_errs[1] && rs_errs[1] > rs_errs[0];
                let slope = |xs: &[f64], ys: &[f64]| {
                    let n = xs.len() as f64;
                    let mx = xs.iter().sum::<f64>() / n;
                    let my = ys.iter().sum::<f64>() / n;
                    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
                    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
                    num / den
                };
                let rs_slope = slope(&rs_v, &rs_errs);
                let vf_slope = slope(&vf_v, &vf_errs);
                let std_ok = rows[2].1 .2 > rows[2].1 .6;
                println!(
                    "  => increasing={increasing} rs_slope={rs_slope:.3} vf_slope={vf_slope:.4} ratio={:.3} std_fast RS>VF={std_ok} ({:.5} vs {:.5})",
                    (vf_slope / rs_slope).abs(),
                    rows[2].1 .2,
                    rows[2].1 .6
                );
            }
        }
    }
}
