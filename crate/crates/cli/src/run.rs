//! Implementations of the evolve/scan/robustness/stirap-optimize/two-qubit
//! subcommands.

use std::fs;
use std::path::Path;

use num_complex::Complex64 as C64;
use raman_ctrl::analysis::{
    gate_fidelity, ideal_gate, leakage_report, optimize_stirap, robustness_grid, state_fidelity,
    LeakageReport, RobustnessGrid, SchemeKind, SchemeSpec, StirapOptimum,
};
use raman_ctrl::propagation::{
    propagate_lindblad, propagate_unitary, EvolutionRecord, FinalState,
};
use raman_ctrl::schemes::{
    ae_schedule, apply_static_errors, ps_schedule, stirap_schedule, ControlSchedule, ErrorModel,
};
use raman_ctrl::{bright_dark_states, BasisLabel, CouplingConfig, DensityMatrix, PureState};
use serde::Serialize;

use crate::config::{EffectiveConfig, InitialState, Scheme};
use crate::CliError;

pub fn coupling_for(cfg: &EffectiveConfig) -> Result<CouplingConfig, CliError> {
    CouplingConfig::with_relative_phase(cfg.omega, cfg.xi).map_err(CliError::config)
}

pub fn initial_state(kind: InitialState, coupling: &CouplingConfig) -> PureState {
    match kind {
        InitialState::Zero => PureState::basis_state(BasisLabel::Zero),
        InitialState::One => PureState::basis_state(BasisLabel::One),
        InitialState::Excited => PureState::basis_state(BasisLabel::Excited),
        InitialState::Bright => bright_dark_states(coupling).0,
        InitialState::Dark => bright_dark_states(coupling).1,
    }
}

pub fn build_schedule(cfg: &EffectiveConfig) -> Result<ControlSchedule, CliError> {
    let coupling = coupling_for(cfg)?;
    let delta = cfg.delta_ratio * cfg.omega;
    let nominal = match cfg.scheme {
        Scheme::Ae => ae_schedule(delta, &coupling, cfg.theta),
        Scheme::Ps => ps_schedule(delta, &coupling, cfg.theta),
        Scheme::Stirap => {
            let (Some(sigma), Some(total_time)) = (cfg.sigma, cfg.total_time) else {
                return Err(CliError::Config(
                    "stirap runs need --sigma and --total-time".into(),
                ));
            };
            stirap_schedule(&coupling, sigma, cfg.t_m.unwrap_or(0.0), total_time, cfg.n_samples)
        }
    }
    .map_err(CliError::config)?;
    let errors = ErrorModel::new(cfg.delta_omega, cfg.delta_delta).map_err(CliError::config)?;
    apply_static_errors(&nominal, &errors).map_err(CliError::config)
}

/// Ideal final density matrix of the nominal gate, when the initial state
/// lies inside the qubit subspace.
fn ideal_final_density(
    cfg: &EffectiveConfig,
    coupling: &CouplingConfig,
    initial: &PureState,
) -> Option<DensityMatrix> {
    if initial.amplitude(BasisLabel::Excited).norm() > 0.0 {
        return None;
    }
    let target = match cfg.scheme {
        // STIRAP's ideal action is the full |0⟩ → |1⟩ transfer
        Scheme::Stirap => {
            let mut m = nalgebra::Matrix2::<C64>::zeros();
            m[(0, 1)] = C64::new(1.0, 0.0);
            m[(1, 0)] = C64::new(1.0, 0.0);
            m
        }
        _ => ideal_gate(coupling, cfg.theta),
    };
    let a = initial.amplitudes();
    let out = nalgebra::Vector3::new(
        target[(0, 0)] * a[0] + target[(0, 1)] * a[1],
        target[(1, 0)] * a[0] + target[(1, 1)] * a[1],
        C64::new(0.0, 0.0),
    );
    PureState::new(out).ok().map(|s| DensityMatrix::from_pure(&s))
}

#[derive(Serialize)]
pub struct EvolveSummary {
    pub config: EffectiveConfig,
    pub total_duration: f64,
    pub leakage: LeakageReport,
    pub final_populations: [f64; 3],
    pub gate_fidelity: Option<f64>,
    pub transfer_fidelity: Option<f64>,
    pub state_fidelity: Option<f64>,
}

pub fn cmd_evolve(
    cfg: &EffectiveConfig,
    out_csv: Option<&Path>,
) -> Result<EvolveSummary, CliError> {
    let coupling = coupling_for(cfg)?;
    let schedule = build_schedule(cfg)?;
    let initial = initial_state(cfg.initial, &coupling);
    let integrator = cfg.integrator();

    let record: EvolutionRecord;
    let mut summary_state_fidelity = None;
    if cfg.gamma > 0.0 {
        let rho0 = DensityMatrix::from_pure(&initial);
        record = propagate_lindblad(&schedule, cfg.gamma, &rho0, &integrator)
            .map_err(CliError::numeric)?;
        if let (Some(ideal), FinalState::Density(rho)) =
            (ideal_final_density(cfg, &coupling, &initial), &record.final_state)
        {
            summary_state_fidelity = Some(state_fidelity(&ideal, rho));
        }
    } else {
        record =
            propagate_unitary(&schedule, &initial, &integrator).map_err(CliError::numeric)?;
        if let (Some(ideal), FinalState::Pure(psi)) =
            (ideal_final_density(cfg, &coupling, &initial), &record.final_state)
        {
            summary_state_fidelity =
                Some(state_fidelity(&ideal, &DensityMatrix::from_pure(psi)));
        }
    }

    let leakage = leakage_report(&record);
    let final_populations = *record.populations.last().expect("record is never empty");

    let mut summary_gate_fidelity = None;
    let mut transfer_fidelity = None;
    if let Some(u) = &record.final_propagator {
        match cfg.scheme {
            Scheme::Stirap => {
                transfer_fidelity = Some(u.matrix()[(1, 0)].norm_sqr());
            }
            _ => {
                summary_gate_fidelity = Some(gate_fidelity(u, &ideal_gate(&coupling, cfg.theta)));
            }
        }
    }

    if let Some(path) = out_csv {
        write_file(path, &record.to_csv_string())?;
    }
    let summary = EvolveSummary {
        config: cfg.clone(),
        total_duration: schedule.total_duration(),
        leakage,
        final_populations,
        gate_fidelity: summary_gate_fidelity,
        transfer_fidelity,
        state_fidelity: summary_state_fidelity,
    };
    Ok(summary)
}

pub fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::Config(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    fs::write(path, content)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

#[derive(Serialize)]
pub struct ScanRow {
    pub delta_ratio: f64,
    pub gate_fidelity: f64,
    pub state_fidelity: f64,
    pub average_pe: f64,
    pub final_pe: f64,
}

#[derive(Serialize)]
pub struct ScanSummary {
    pub config: EffectiveConfig,
    pub rows: Vec<ScanRow>,
}

/// Sweep Δ/Ω at fixed ϑ: gate fidelity of the (decay-free) propagator plus
/// the state fidelity of the run (Lindblad when γ > 0).
pub fn cmd_scan(
    cfg: &EffectiveConfig,
    ratio_min: f64,
    ratio_max: f64,
    points: usize,
) -> Result<ScanSummary, CliError> {
    if points < 2 || !(ratio_max > ratio_min) || ratio_min < 0.0 {
        return Err(CliError::Config(format!(
            "invalid scan axis [{ratio_min}, {ratio_max}] with {points} points"
        )));
    }
    let coupling = coupling_for(cfg)?;
    let initial = initial_state(cfg.initial, &coupling);
    let integrator = cfg.integrator();
    let mut rows = Vec::with_capacity(points);
    for k in 0..points {
        let ratio = ratio_min + (ratio_max - ratio_min) * k as f64 / (points - 1) as f64;
        let point_cfg = EffectiveConfig { delta_ratio: ratio, ..cfg.clone() };
        let schedule = build_schedule(&point_cfg)?;
        let unitary =
            propagate_unitary(&schedule, &initial, &integrator).map_err(CliError::numeric)?;
        let u = unitary.final_propagator.as_ref().expect("unitary run");
        let gate_fid = gate_fidelity(u, &ideal_gate(&coupling, cfg.theta));
        let ideal = ideal_final_density(&point_cfg, &coupling, &initial);
        let (leakage, state_fid) = if cfg.gamma > 0.0 {
            let rho0 = DensityMatrix::from_pure(&initial);
            let rec = propagate_lindblad(&schedule, cfg.gamma, &rho0, &integrator)
                .map_err(CliError::numeric)?;
            let FinalState::Density(rho) = &rec.final_state else { unreachable!() };
            let fid = ideal.as_ref().map(|i| state_fidelity(i, rho)).unwrap_or(f64::NAN);
            (leakage_report(&rec), fid)
        } else {
            let FinalState::Pure(psi) = &unitary.final_state else { unreachable!() };
            let fid = ideal
                .as_ref()
                .map(|i| state_fidelity(i, &DensityMatrix::from_pure(psi)))
                .unwrap_or(f64::NAN);
            (leakage_report(&unitary), fid)
        };
        rows.push(ScanRow {
            delta_ratio: ratio,
            gate_fidelity: gate_fid,
            state_fidelity: state_fid,
            average_pe: leakage.average_pe,
            final_pe: leakage.final_pe,
        });
    }
    Ok(ScanSummary { config: cfg.clone(), rows })
}

pub fn scan_csv(summary: &ScanSummary) -> String {
    let mut out = String::from("delta_ratio,gate_fidelity,state_fidelity,average_pe,final_pe\n");
    for row in &summary.rows {
        out.push_str(&format!(
            "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}\n",
            row.delta_ratio, row.gate_fidelity, row.state_fidelity, row.average_pe, row.final_pe
        ));
    }
    out
}

#[derive(Serialize)]
pub struct RobustnessSummary {
    pub config: EffectiveConfig,
    pub grid: RobustnessGrid,
}

pub fn cmd_robustness(
    cfg: &EffectiveConfig,
    err_range: f64,
    err_points: usize,
    haar_samples: usize,
) -> Result<RobustnessSummary, CliError> {
    let Some(kind) = cfg.scheme.kind() else {
        return Err(CliError::Config("robustness grids run the ae or ps scheme".into()));
    };
    if err_points < 2 || !(err_range > 0.0) {
        return Err(CliError::Config(format!(
            "invalid error axis: range {err_range}, {err_points} points"
        )));
    }
    let coupling = coupling_for(cfg)?;
    let axis: Vec<f64> = (0..err_points)
        .map(|k| (k as f64 / (err_points - 1) as f64 - 0.5) * 2.0 * err_range * cfg.omega)
        .collect();
    let spec = SchemeSpec { kind, delta: cfg.delta_ratio * cfg.omega, coupling };
    let grid = robustness_grid(&spec, cfg.theta, &axis, &axis, haar_samples, cfg.seed)
        .map_err(CliError::numeric)?;
    Ok(RobustnessSummary { config: cfg.clone(), grid })
}

#[derive(Serialize)]
pub struct StirapOptimizeSummary {
    pub config: EffectiveConfig,
    pub total_time: f64,
    pub optimum: StirapOptimum,
}

pub fn cmd_stirap_optimize(
    cfg: &EffectiveConfig,
    n_restarts: usize,
) -> Result<StirapOptimizeSummary, CliError> {
    let coupling = coupling_for(cfg)?;
    // explicit total time, or matched to the phase-shift run at this Δ/Ω
    let total_time = match cfg.total_time {
        Some(t) => t,
        None => ps_schedule(cfg.delta_ratio * cfg.omega, &coupling, cfg.theta)
            .map_err(CliError::config)?
            .total_duration(),
    };
    let optimum = optimize_stirap(total_time, &coupling, n_restarts, cfg.seed, &cfg.integrator())
        .map_err(CliError::numeric)?;
    Ok(StirapOptimizeSummary { config: cfg.clone(), total_time, optimum })
}

pub fn parse_complex(text: &str) -> Result<C64, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Config(format!("bad complex component {s:?}")))
    };
    match parts.as_slice() {
        [re] => Ok(C64::new(parse(re)?, 0.0)),
        [re, im] => Ok(C64::new(parse(re)?, parse(im)?)),
        _ => Err(CliError::Config(format!("bad complex literal {text:?}"))),
    }
}

#[derive(Serialize)]
pub struct TwoQubitSummary {
    pub scheme: String,
    pub theta: f64,
    pub g1: [f64; 2],
    pub g2: [f64; 2],
    pub delta: f64,
    pub matrix: Vec<Vec<[f64; 2]>>,
    pub leakage: LeakageReport,
    pub unitarity_defect: f64,
}

pub fn cmd_two_qubit(
    g1: C64,
    g2: C64,
    delta: f64,
    theta: f64,
    kind: SchemeKind,
) -> Result<TwoQubitSummary, CliError> {
    let params = raman_ctrl::two_qubit::CavityQubitParams { g1, g2, delta };
    let gate = raman_ctrl::two_qubit::synthesize_two_qubit_gate(
        &params,
        theta,
        kind,
        &Default::default(),
    )
    .map_err(CliError::config)?;
    let matrix = (0..4)
        .map(|r| (0..4).map(|c| [gate.matrix[(r, c)].re, gate.matrix[(r, c)].im]).collect())
        .collect();
    Ok(TwoQubitSummary {
        scheme: kind.name().to_string(),
        theta,
        g1: [g1.re, g1.im],
        g2: [g2.re, g2.im],
        delta,
        matrix,
        leakage: gate.leakage,
        unitarity_defect: gate.unitarity_defect(),
    })
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("summary serialization cannot fail")
}
