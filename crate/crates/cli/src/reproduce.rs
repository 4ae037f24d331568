//! Figure dataset reproduction: each figure id emits its panel CSVs, a
//! MANIFEST.json recording every parameter (with `assumed: true` on values
//! the source text leaves unstated), and a gnuplot stub.

use std::path::{Path, PathBuf};

use raman_ctrl::analysis::{
    refine_stirap, theta_averaged_robustness_grid, SchemeKind, SchemeSpec,
    DEFAULT_SEED,
};
use raman_ctrl::propagation::IntegratorConfig;
use raman_ctrl::schemes::ps_schedule;
use raman_ctrl::CouplingConfig;
use serde::Serialize;
use serde_json::json;

use crate::config::{EffectiveConfig, InitialState, Scheme};
use crate::run::{cmd_evolve, cmd_robustness, cmd_scan, scan_csv, to_json_pretty, write_file};
use crate::CliError;

const OMEGA: f64 = std::f64::consts::TAU;
const PI: f64 = std::f64::consts::PI;

#[derive(Serialize)]
struct PanelEntry {
    panel: String,
    file: String,
    parameters: serde_json::Value,
    assumed: bool,
}

struct Manifest {
    figure: &'static str,
    panels: Vec<PanelEntry>,
    notes: Vec<String>,
}

impl Manifest {
    fn new(figure: &'static str) -> Self {
        Manifest { figure, panels: Vec::new(), notes: Vec::new() }
    }

    fn panel(&mut self, panel: &str, file: &str, parameters: serde_json::Value, assumed: bool) {
        self.panels.push(PanelEntry {
            panel: panel.to_string(),
            file: file.to_string(),
            parameters,
            assumed,
        });
    }

    fn write(&self, dir: &Path) -> Result<(), CliError> {
        let doc = json!({
            "figure": self.figure,
            "seed": DEFAULT_SEED,
            "panels": self.panels.iter().map(|p| json!({
                "panel": p.panel,
                "file": p.file,
                "parameters": p.parameters,
                "assumed": p.assumed,
            })).collect::<Vec<_>>(),
            "notes": self.notes,
        });
        write_file(
            &dir.join("MANIFEST.json"),
            &serde_json::to_string_pretty(&doc).expect("manifest serialization"),
        )
    }
}

fn base_config(scheme: Scheme, delta_ratio: f64, theta: f64) -> EffectiveConfig {
    EffectiveConfig {
        scheme,
        delta_ratio,
        omega: OMEGA,
        theta,
        xi: 0.0,
        initial: InitialState::Zero,
        gamma: 0.0,
        delta_omega: 0.0,
        delta_delta: 0.0,
        sigma: None,
        t_m: None,
        total_time: None,
        n_samples: raman_ctrl::analysis::STIRAP_SAMPLES,
        dt: None,
        record_stride: 1,
        seed: DEFAULT_SEED,
    }
}

fn trajectory_panel(
    dir: &Path,
    manifest: &mut Manifest,
    panel: &str,
    file: &str,
    cfg: &EffectiveConfig,
    assumed: bool,
) -> Result<(), CliError> {
    let summary = cmd_evolve(cfg, Some(&dir.join(file)))?;
    let mut params = serde_json::to_value(cfg).expect("config serialization");
    params["average_pe"] = json!(summary.leakage.average_pe);
    manifest.panel(panel, file, params, assumed);
    Ok(())
}

pub fn reproduce(figure: &str, out_dir: &Path, mc_samples: usize) -> Result<PathBuf, CliError> {
    let dir = out_dir.join(figure);
    match figure {
        "fig2" => fig2(&dir)?,
        "fig3" => fig3(&dir)?,
        "fig4" => fig4(&dir)?,
        "fig5" => fig5(&dir)?,
        "fig6" => fig6(&dir, mc_samples)?,
        other => {
            return Err(CliError::Config(format!(
                "unknown figure id {other:?} (expected fig2..fig6)"
            )))
        }
    }
    Ok(dir)
}

/// AE vs phase-shift population transfer. The figure states Ω₁=Ω₂, Ω=2π and
/// ϑ=π but not the per-panel Δ; the values used here are inferred by
/// inverting the reported average leakages and are flagged assumed.
fn fig2(dir: &Path) -> Result<(), CliError> {
    let mut manifest = Manifest::new("fig2");
    manifest.notes.push(
        "per-panel detuning is not stated; delta_ratio inferred by inverting the reported \
         average leakages (AE: 1.20e-1, 4.95e-2, 1.56e-4; phase shift: 6.86e-2, 2.58e-2, 7.81e-5)"
            .into(),
    );
    for (panels, ratio) in [(("a", "b"), 1.0), (("c", "d"), 2.0), (("e", "f"), 40.0)] {
        let tag = format!("delta{ratio:.0}");
        trajectory_panel(
            dir,
            &mut manifest,
            panels.0,
            &format!("ae_{tag}.csv"),
            &base_config(Scheme::Ae, ratio, PI),
            true,
        )?;
        trajectory_panel(
            dir,
            &mut manifest,
            panels.1,
            &format!("ps_{tag}.csv"),
            &base_config(Scheme::Ps, ratio, PI),
            true,
        )?;
    }
    write_file(
        &dir.join("plot.gp"),
        &gnuplot_stub(
            "fig2",
            &["ae_delta1.csv", "ps_delta1.csv", "ae_delta2.csv", "ps_delta2.csv", "ae_delta40.csv", "ps_delta40.csv"],
        ),
    )?;
    manifest.write(dir)
}

/// STIRAP vs phase-shift comparison at matched total times and peak coupling.
fn fig3(dir: &Path) -> Result<(), CliError> {
    let coupling = CouplingConfig::symmetric(OMEGA).map_err(CliError::config)?;
    let mut manifest = Manifest::new("fig3");
    manifest.notes.push(
        "STIRAP pulse parameters are the reported optima; each is verified stationary under \
         simplex refinement (see the optimization log files). Distinct local optima tie in \
         transfer fidelity at the numerical floor."
            .into(),
    );
    let cases = [
        (("a", "b"), 2.0, 0.75, 0.175),
        (("c", "d"), 20.0, 1.02, 0.4),
        (("e", "f"), 40.0, 15.6, 13.4),
    ];
    for ((stirap_panel, ps_panel), ratio, sigma, t_m) in cases {
        let total_time = ps_schedule(ratio * OMEGA, &coupling, PI)
            .map_err(CliError::config)?
            .total_duration();
        let tag = format!("delta{ratio:.0}");

        // optimization log: local refinement from the reported pair
        let refined = refine_stirap(total_time, &coupling, sigma, t_m, &IntegratorConfig::default())
            .map_err(CliError::numeric)?;
        write_file(
            &dir.join(format!("stirap_optimize_{tag}.json")),
            &to_json_pretty(&json!({
                "total_time": total_time,
                "start": {"sigma": sigma, "t_m": t_m},
                "refined": refined,
            })),
        )?;

        let mut stirap_cfg = base_config(Scheme::Stirap, ratio, PI);
        stirap_cfg.sigma = Some(sigma);
        stirap_cfg.t_m = Some(t_m);
        stirap_cfg.total_time = Some(total_time);
        trajectory_panel(
            dir,
            &mut manifest,
            stirap_panel,
            &format!("stirap_{tag}.csv"),
            &stirap_cfg,
            false,
        )?;
        trajectory_panel(
            dir,
            &mut manifest,
            ps_panel,
            &format!("ps_{tag}.csv"),
            &base_config(Scheme::Ps, ratio, PI),
            false,
        )?;
    }
    write_file(
        &dir.join("plot.gp"),
        &gnuplot_stub(
            "fig3",
            &["stirap_delta2.csv", "ps_delta2.csv", "stirap_delta20.csv", "ps_delta20.csv", "stirap_delta40.csv", "ps_delta40.csv"],
        ),
    )?;
    manifest.write(dir)
}

/// R_x(π/2) trajectories, the gate-fidelity sweep, and the γ = 0.5 decay
/// sweep.
fn fig4(dir: &Path) -> Result<(), CliError> {
    let mut manifest = Manifest::new("fig4");
    for (panel, scheme, file) in [
        ("a", Scheme::Ae, "ae_trajectory.csv"),
        ("b", Scheme::Ps, "ps_trajectory.csv"),
    ] {
        trajectory_panel(
            dir,
            &mut manifest,
            panel,
            file,
            &base_config(scheme, 2.0, PI / 2.0),
            false,
        )?;
    }
    manifest.notes.push(
        "panels c, d sweep delta_ratio; c is decay-free gate fidelity, d is state fidelity at \
         gamma = 0.5 from initial |0>. The sweep range [1, 10] with 20 points is assumed (the \
         figure axis range is not stated numerically)."
            .into(),
    );
    for (panel, gamma, file) in [
        ("c", 0.0, "gate_fidelity_scan.csv"),
        ("d", 0.5, "state_fidelity_scan.csv"),
    ] {
        for scheme in [Scheme::Ae, Scheme::Ps] {
            let mut cfg = base_config(scheme, 2.0, PI / 2.0);
            cfg.gamma = gamma;
            let scan = cmd_scan(&cfg, 1.0, 10.0, 20)?;
            let file_name = format!("{}_{file}", scheme.name());
            write_file(&dir.join(&file_name), &scan_csv(&scan))?;
            manifest.panel(
                panel,
                &file_name,
                json!({"scheme": scheme.name(), "gamma": gamma, "theta": PI / 2.0,
                       "delta_ratio_axis": [1.0, 10.0], "points": 20, "omega": OMEGA}),
                true,
            );
        }
    }
    write_file(
        &dir.join("plot.gp"),
        &gnuplot_stub(
            "fig4",
            &["ae_trajectory.csv", "ps_trajectory.csv", "ae_gate_fidelity_scan.csv", "ps_gate_fidelity_scan.csv", "ae_state_fidelity_scan.csv", "ps_state_fidelity_scan.csv"],
        ),
    )?;
    manifest.write(dir)
}

/// Fixed-ϑ robustness grids over static amplitude and detuning errors.
fn fig5(dir: &Path) -> Result<(), CliError> {
    let mut manifest = Manifest::new("fig5");
    manifest.notes.push(
        "error axes span ±0.1 Ω with 41 points per axis; the figure's axis ranges are not \
         stated numerically"
            .into(),
    );
    for (panels, ratio) in [(("a", "c"), 3.0), (("b", "d"), 7.0)] {
        for (panel, scheme) in [(panels.0, Scheme::Ae), (panels.1, Scheme::Ps)] {
            let cfg = base_config(scheme, ratio, PI);
            let summary = cmd_robustness(&cfg, 0.1, 41, 2048)?;
            let file = format!("{}_ratio{ratio:.0}.csv", scheme.name());
            write_file(&dir.join(&file), &summary.grid.to_csv_string())?;
            write_file(
                &dir.join(format!("{}_ratio{ratio:.0}.json", scheme.name())),
                &to_json_pretty(&summary),
            )?;
            manifest.panel(
                panel,
                &file,
                json!({"scheme": scheme.name(), "delta_ratio": ratio, "theta": PI,
                       "err_range": 0.1, "err_points": 41, "haar_samples": 2048,
                       "axes_assumed": true}),
                true,
            );
        }
    }
    write_file(
        &dir.join("plot.gp"),
        &gnuplot_stub("fig5", &["ae_ratio3.csv", "ps_ratio3.csv", "ae_ratio7.csv", "ps_ratio7.csv"]),
    )?;
    manifest.write(dir)
}

/// The same grids averaged over ϑ ∈ (0, 2π].
fn fig6(dir: &Path, mc_samples: usize) -> Result<(), CliError> {
    let coupling = CouplingConfig::symmetric(OMEGA).map_err(CliError::config)?;
    let axis = raman_ctrl::analysis::default_error_axis(OMEGA);
    let mut manifest = Manifest::new("fig6");
    manifest.notes.push(format!(
        "theta-averaged with {mc_samples} Monte Carlo angle samples per cell (the figure used \
         1e4; override with --mc-samples), 128 Haar states per angle"
    ));
    for (panels, ratio) in [(("a", "c"), 3.0), (("b", "d"), 7.0)] {
        for (panel, kind, name) in [
            (panels.0, SchemeKind::Ae, "ae"),
            (panels.1, SchemeKind::Ps, "ps"),
        ] {
            let spec = SchemeSpec { kind, delta: ratio * OMEGA, coupling };
            let grid = theta_averaged_robustness_grid(
                &spec,
                &axis,
                &axis,
                mc_samples,
                128,
                DEFAULT_SEED,
            )
            .map_err(CliError::numeric)?;
            let file = format!("{name}_ratio{ratio:.0}.csv");
            write_file(&dir.join(&file), &grid.to_csv_string())?;
            manifest.panel(
                panel,
                &file,
                json!({"scheme": name, "delta_ratio": ratio, "theta": "uniform (0, 2pi]",
                       "mc_samples": mc_samples, "haar_samples": 128,
                       "err_range": 0.1, "err_points": 41, "axes_assumed": true}),
                true,
            );
        }
    }
    write_file(
        &dir.join("plot.gp"),
        &gnuplot_stub("fig6", &["ae_ratio3.csv", "ps_ratio3.csv", "ae_ratio7.csv", "ps_ratio7.csv"]),
    )?;
    manifest.write(dir)
}

fn gnuplot_stub(figure: &str, files: &[&str]) -> String {
    let mut out = format!(
        "# gnuplot stub for {figure}; the CSVs carry the data, adjust styling as needed\n\
         set datafile separator ','\n\
         set key autotitle columnhead\n"
    );
    for (k, file) in files.iter().enumerate() {
        if file.contains("ratio") {
            out.push_str(&format!(
                "# panel {k}: matrix heat map\n# plot '{file}' matrix rowheaders columnheaders with image\n"
            ));
        } else {
            out.push_str(&format!("# panel {k}\n# plot '{file}' using 1:2 with lines\n"));
        }
    }
    out
}

/// Reference leakage values for the assumed-Δ panels of fig2; only values
/// with stated detunings gate acceptance.
pub fn fig2_reference_leakages() -> [(f64, f64, f64); 3] {
    // (delta_ratio, ae_average_pe, ps_average_pe)
    [(1.0, 1.20e-1, 6.86e-2), (2.0, 4.95e-2, 2.58e-2), (40.0, 1.56e-4, 7.81e-5)]
}
