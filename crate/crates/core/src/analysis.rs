//! Fidelity and leakage metrics, robustness scans, Monte Carlo averaging,
//! perturbative leakage predictors, and the STIRAP parameter search.

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::cr;
use crate::propagation::{
    propagate_unitary, schedule_propagator, EvolutionRecord, IntegratorConfig,
};
use crate::schemes::{
    ae_schedule, apply_static_errors, ps_schedule, stirap_schedule, ControlSchedule, ErrorModel,
};
use crate::system::{bright_dark_states, CouplingConfig, DensityMatrix, Propagator, PureState};

/// Default generator seed recorded in outputs.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Time-averaged, maximal, and final population of the intermediate state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeakageReport {
    pub average_pe: f64,
    pub max_pe: f64,
    pub final_pe: f64,
}

/// Trapezoidal time average of Pe over the recorded grid, its maximum, and
/// its final value.
pub fn leakage_report(record: &EvolutionRecord) -> LeakageReport {
    assert!(!record.is_empty(), "leakage report needs a nonempty record");
    let pe = |k: usize| record.populations[k][2];
    let mut integral = 0.0;
    let mut max_pe = pe(0);
    for k in 1..record.len() {
        let dt = record.times[k] - record.times[k - 1];
        integral += 0.5 * (pe(k) + pe(k - 1)) * dt;
        max_pe = max_pe.max(pe(k));
    }
    let span = record.total_duration();
    LeakageReport {
        average_pe: if span > 0.0 { integral / span } else { pe(0) },
        max_pe,
        final_pe: pe(record.len() - 1),
    }
}

/// Scheme selector for the piecewise-constant drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Ae,
    Ps,
}

impl SchemeKind {
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Ae => "ae",
            SchemeKind::Ps => "ps",
        }
    }
}

/// A scheme at fixed detuning and coupling; the rotation angle ϑ picks the
/// concrete schedule.
#[derive(Debug, Clone, Copy)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    pub delta: f64,
    pub coupling: CouplingConfig,
}

impl SchemeSpec {
    pub fn schedule(&self, theta: f64) -> Result<ControlSchedule> {
        match self.kind {
            SchemeKind::Ae => ae_schedule(self.delta, &self.coupling, theta),
            SchemeKind::Ps => ps_schedule(self.delta, &self.coupling, theta),
        }
    }
}

/// Fidelity metrics of one run with the parameters that produced them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FidelityReport {
    pub scheme: String,
    pub delta_ratio: f64,
    pub theta: f64,
    pub gamma: f64,
    pub delta_omega: f64,
    pub delta_delta: f64,
    pub gate_fidelity: Option<f64>,
    pub state_fidelity: Option<f64>,
}

/// Ideal gate on span{|0⟩, |1⟩}: e^{−iϑ}|b⟩⟨b| + |d⟩⟨d| restricted to the
/// qubit subspace. For equal amplitudes with relative phase ξ this equals
/// R_ξ(ϑ) = exp(−iϑσ_ξ/2) up to a global phase.
pub fn ideal_gate(coupling: &CouplingConfig, theta: f64) -> Matrix2<C64> {
    let (bright, dark) = bright_dark_states(coupling);
    let b = bright.amplitudes();
    let d = dark.amplitudes();
    let phase = C64::cis(-theta);
    let mut out = Matrix2::zeros();
    for r in 0..2 {
        for c_ in 0..2 {
            out[(r, c_)] = b[r] * b[c_].conj() * phase + d[r] * d[c_].conj();
        }
    }
    out
}

/// Gate fidelity F_g = |Tr(U†·U_id)|/2 with U restricted to the 2x2 block on
/// span{|0⟩, |1⟩}. The absolute value makes it global-phase invariant.
pub fn gate_fidelity(u: &Propagator, u_id: &Matrix2<C64>) -> f64 {
    let block = u.qubit_block();
    (block.adjoint() * u_id).trace().norm() / 2.0
}

/// State fidelity F = Tr(ρ_id ρ).
pub fn state_fidelity(rho_id: &DensityMatrix, rho: &DensityMatrix) -> f64 {
    (rho_id.matrix() * rho.matrix()).trace().re
}

fn mixed_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 over (seed, index); decorrelates per-sample generators
    let mut z = seed ^ index.wrapping_mul(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn haar_qubit_state(rng: &mut ChaCha12Rng) -> (C64, C64) {
    // polar angle via arccos of a uniform, azimuth uniform
    let cos_chi: f64 = rng.gen_range(-1.0..=1.0);
    let chi = cos_chi.acos();
    let beta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    ((chi / 2.0).cos().into(), C64::cis(beta) * cr((chi / 2.0).sin()))
}

/// Mean of |⟨ψ|U†·u_id|ψ⟩|² over Haar-random qubit states |ψ⟩, with U the
/// qubit block of the full propagator. Deterministic given the seed.
pub fn average_fidelity_over_states(
    u: &Propagator,
    u_id: &Matrix2<C64>,
    n_samples: usize,
    seed: u64,
) -> f64 {
    assert!(n_samples >= 1);
    let m = u.qubit_block().adjoint() * u_id;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    for _ in 0..n_samples {
        let (a, b) = haar_qubit_state(&mut rng);
        // ⟨ψ|M|ψ⟩
        let ov = a.conj() * (m[(0, 0)] * a + m[(0, 1)] * b)
            + b.conj() * (m[(1, 0)] * a + m[(1, 1)] * b);
        sum += ov.norm_sqr();
    }
    sum / n_samples as f64
}

/// Monte Carlo averages over the rotation angle ϑ ~ Uniform(0, 2π], reported
/// with their standard errors. Gate fidelity is measured against the ideal
/// gate at each sampled ϑ; the leakage column is the final Pe for initial
/// |b⟩.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ThetaAverages {
    pub mean_gate_fidelity: f64,
    pub se_gate_fidelity: f64,
    pub mean_final_pe_bright: f64,
    pub se_final_pe_bright: f64,
    pub n_samples: usize,
    pub seed: u64,
}

pub fn mc_average_over_theta(
    spec: &SchemeSpec,
    errors: &ErrorModel,
    n_samples: usize,
    seed: u64,
) -> Result<ThetaAverages> {
    if n_samples == 0 {
        return Err(Error::param("n_samples", 0.0));
    }
    let cfg = IntegratorConfig::default();
    let (bright, _) = bright_dark_states(&spec.coupling);
    let samples: Vec<(f64, f64)> = (0..n_samples as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha12Rng::seed_from_u64(mixed_seed(seed, k));
            // half-open (0, 2π]: 2π(1−u) with u ∈ [0, 1)
            let u: f64 = rng.gen_range(0.0..1.0);
            let theta = std::f64::consts::TAU * (1.0 - u);
            let schedule = spec.schedule(theta)?;
            let errored = apply_static_errors(&schedule, errors)?;
            let prop = schedule_propagator(&errored, &cfg)?;
            let fid = gate_fidelity(&prop, &ideal_gate(&spec.coupling, theta));
            let amp_e = prop.matrix().row(2) * bright.amplitudes();
            Ok((fid, amp_e[(0, 0)].norm_sqr()))
        })
        .collect::<Result<_>>()?;

    let n = n_samples as f64;
    let mean = |f: &dyn Fn(&(f64, f64)) -> f64| samples.iter().map(f).sum::<f64>() / n;
    let mean_fid = mean(&|s| s.0);
    let mean_pe = mean(&|s| s.1);
    let var = |f: &dyn Fn(&(f64, f64)) -> f64, m: f64| {
        samples.iter().map(|s| (f(s) - m).powi(2)).sum::<f64>() / n.max(2.0)
    };
    Ok(ThetaAverages {
        mean_gate_fidelity: mean_fid,
        se_gate_fidelity: (var(&|s| s.0, mean_fid) / n).sqrt(),
        mean_final_pe_bright: mean_pe,
        se_final_pe_bright: (var(&|s| s.1, mean_pe) / n).sqrt(),
        n_samples,
        seed,
    })
}

/// Fidelity of a scheme over a grid of static amplitude and detuning errors.
/// `fidelity[i][j]` corresponds to `axis_delta_omega[i]`, `axis_delta_delta[j]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RobustnessGrid {
    pub axis_delta_omega: Vec<f64>,
    pub axis_delta_delta: Vec<f64>,
    pub fidelity: Vec<Vec<f64>>,
    pub haar_samples: usize,
    pub seed: u64,
}

impl RobustnessGrid {
    /// CSV matrix with axis header row and column: first row lists the δΔ
    /// axis, each following row starts with its δΩ value.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("delta_omega\\delta_delta");
        for dd in &self.axis_delta_delta {
            out.push_str(&format!(",{dd:.11e}"));
        }
        out.push('\n');
        for (i, row) in self.fidelity.iter().enumerate() {
            out.push_str(&format!("{:.11e}", self.axis_delta_omega[i]));
            for f in row {
                out.push_str(&format!(",{f:.11e}"));
            }
            out.push('\n');
        }
        out
    }

    /// The fidelity row at δΩ = 0 (nearest axis point), used for comparing
    /// oscillation structure along the detuning-error axis.
    pub fn row_at_zero_delta_omega(&self) -> &[f64] {
        let i = self
            .axis_delta_omega
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .expect("nonempty axis");
        &self.fidelity[i]
    }
}

/// Default error axis: 41 points spanning ±0.1·Ω.
pub fn default_error_axis(omega_norm: f64) -> Vec<f64> {
    let n = 41;
    (0..n)
        .map(|k| (k as f64 / (n - 1) as f64 - 0.5) * 0.2 * omega_norm)
        .collect()
}

/// State-averaged fidelity of `spec` at angle ϑ over an error grid. Each cell
/// derives its own generator from (seed, cell index), so results do not
/// depend on scheduling order or worker count.
pub fn robustness_grid(
    spec: &SchemeSpec,
    theta: f64,
    axis_delta_omega: &[f64],
    axis_delta_delta: &[f64],
    haar_samples: usize,
    seed: u64,
) -> Result<RobustnessGrid> {
    if axis_delta_omega.is_empty() || axis_delta_delta.is_empty() {
        return Err(Error::param("axis length", 0.0));
    }
    let cfg = IntegratorConfig::default();
    let u_id = ideal_gate(&spec.coupling, theta);
    let n_dd = axis_delta_delta.len();
    let cells: Vec<f64> = (0..axis_delta_omega.len() * n_dd)
        .into_par_iter()
        .map(|idx| {
            let i = idx / n_dd;
            let j = idx % n_dd;
            let errors = ErrorModel {
                delta_omega: axis_delta_omega[i],
                delta_delta: axis_delta_delta[j],
            };
            let schedule = spec.schedule(theta)?;
            let errored = apply_static_errors(&schedule, &errors)?;
            let prop = schedule_propagator(&errored, &cfg)?;
            Ok(average_fidelity_over_states(
                &prop,
                &u_id,
                haar_samples,
                mixed_seed(seed, idx as u64),
            ))
        })
        .collect::<Result<_>>()?;
    let fidelity = cells.chunks(n_dd).map(|row| row.to_vec()).collect();
    Ok(RobustnessGrid {
        axis_delta_omega: axis_delta_omega.to_vec(),
        axis_delta_delta: axis_delta_delta.to_vec(),
        fidelity,
        haar_samples,
        seed,
    })
}

/// Robustness grid with the cell metric additionally averaged over the
/// rotation angle ϑ ~ Uniform(0, 2π]: each cell holds the mean over sampled
/// ϑ of the Haar state-averaged fidelity of R(ϑ) under that cell's errors.
pub fn theta_averaged_robustness_grid(
    spec: &SchemeSpec,
    axis_delta_omega: &[f64],
    axis_delta_delta: &[f64],
    theta_samples: usize,
    haar_samples: usize,
    seed: u64,
) -> Result<RobustnessGrid> {
    if axis_delta_omega.is_empty() || axis_delta_delta.is_empty() {
        return Err(Error::param("axis length", 0.0));
    }
    if theta_samples == 0 {
        return Err(Error::param("theta_samples", 0.0));
    }
    let cfg = IntegratorConfig::default();
    let n_dd = axis_delta_delta.len();
    let cells: Vec<f64> = (0..axis_delta_omega.len() * n_dd)
        .into_par_iter()
        .map(|idx| {
            let i = idx / n_dd;
            let j = idx % n_dd;
            let errors = ErrorModel {
                delta_omega: axis_delta_omega[i],
                delta_delta: axis_delta_delta[j],
            };
            let cell_seed = mixed_seed(seed, idx as u64);
            let mut rng = ChaCha12Rng::seed_from_u64(cell_seed);
            let mut sum = 0.0;
            for k in 0..theta_samples {
                let u: f64 = rng.gen_range(0.0..1.0);
                let theta = std::f64::consts::TAU * (1.0 - u);
                let schedule = spec.schedule(theta)?;
                let errored = apply_static_errors(&schedule, &errors)?;
                let prop = schedule_propagator(&errored, &cfg)?;
                sum += average_fidelity_over_states(
                    &prop,
                    &ideal_gate(&spec.coupling, theta),
                    haar_samples,
                    mixed_seed(cell_seed, k as u64),
                );
            }
            Ok(sum / theta_samples as f64)
        })
        .collect::<Result<_>>()?;
    let fidelity = cells.chunks(n_dd).map(|row| row.to_vec()).collect();
    Ok(RobustnessGrid {
        axis_delta_omega: axis_delta_omega.to_vec(),
        axis_delta_delta: axis_delta_delta.to_vec(),
        fidelity,
        haar_samples,
        seed,
    })
}

/// Leading-order AE leakage under a single static error:
/// Pe(t) = |α|² (Ω/Δ)² sin²(ωt/2 + t·δΩ·sinθ/2)  (amplitude error), or
/// Pe(t) = |α|² (Ω/Δ)² sin²(ωt/2 + t·δΔ·cosθ/2)  (detuning error).
/// The two error kinds have no combined closed form and cannot both be
/// nonzero.
pub fn predicted_leakage_ae(
    t: f64,
    alpha_sq: f64,
    delta: f64,
    omega_rabi: f64,
    d_omega: f64,
    d_delta: f64,
) -> Result<f64> {
    if d_omega != 0.0 && d_delta != 0.0 {
        return Err(Error::InvalidSchedule(
            "predictor takes amplitude or detuning error, not both".into(),
        ));
    }
    if delta <= 0.0 {
        return Err(Error::param("delta", delta));
    }
    let omega = (delta * delta + omega_rabi * omega_rabi).sqrt();
    let theta = omega_rabi.atan2(delta);
    let drift = if d_omega != 0.0 {
        t * d_omega * theta.sin() / 2.0
    } else {
        t * d_delta * theta.cos() / 2.0
    };
    let ratio_sq = (omega_rabi / delta).powi(2);
    Ok(alpha_sq * ratio_sq * (omega * t / 2.0 + drift).sin().powi(2))
}

/// Leading-order phase-shift leakage: a constant plateau during the parked
/// segment and zero at the end of the control.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PsLeakagePrediction {
    pub plateau_pe: f64,
    pub final_pe: f64,
}

pub fn predicted_leakage_ps(alpha_sq: f64, delta: f64, omega_rabi: f64) -> Result<PsLeakagePrediction> {
    if delta <= 0.0 {
        return Err(Error::param("delta", delta));
    }
    Ok(PsLeakagePrediction {
        plateau_pe: 0.25 * alpha_sq * (omega_rabi / delta).powi(2),
        final_pe: 0.0,
    })
}

/// Result of the STIRAP pulse-parameter search.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StirapOptimum {
    pub sigma: f64,
    pub t_m: f64,
    pub final_fidelity: f64,
    pub average_pe: f64,
    pub seed: u64,
}

/// Samples per STIRAP schedule.
pub const STIRAP_SAMPLES: usize = 4000;

fn stirap_transfer_fidelity(
    coupling: &CouplingConfig,
    sigma: f64,
    t_m: f64,
    total_time: f64,
    cfg: &IntegratorConfig,
) -> f64 {
    if sigma <= 0.0 || !(0.0..=total_time).contains(&t_m) {
        return 0.0;
    }
    let Ok(schedule) = stirap_schedule(coupling, sigma, t_m, total_time, STIRAP_SAMPLES) else {
        return 0.0;
    };
    let Ok(u) = schedule_propagator(&schedule, cfg) else {
        return 0.0;
    };
    // transfer |0⟩ → |1⟩
    u.matrix()[(1, 0)].norm_sqr()
}

/// Derivative-free simplex descent on the negative transfer fidelity.
fn nelder_mead_2d(
    cost: impl Fn(f64, f64) -> f64,
    start: (f64, f64),
    step: (f64, f64),
    max_iter: usize,
) -> ((f64, f64), f64) {
    let mut simplex = vec![
        (start, cost(start.0, start.1)),
        ((start.0 + step.0, start.1), cost(start.0 + step.0, start.1)),
        ((start.0, start.1 + step.1), cost(start.0, start.1 + step.1)),
    ];
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0], simplex[2]);
        if (worst.1 - best.1).abs() < 1e-12 {
            break;
        }
        let centroid = (
            (simplex[0].0 .0 + simplex[1].0 .0) / 2.0,
            (simplex[0].0 .1 + simplex[1].0 .1) / 2.0,
        );
        let reflect = (
            centroid.0 + (centroid.0 - worst.0 .0),
            centroid.1 + (centroid.1 - worst.0 .1),
        );
        let f_reflect = cost(reflect.0, reflect.1);
        if f_reflect < best.1 {
            let expand = (
                centroid.0 + 2.0 * (centroid.0 - worst.0 .0),
                centroid.1 + 2.0 * (centroid.1 - worst.0 .1),
            );
            let f_expand = cost(expand.0, expand.1);
            simplex[2] = if f_expand < f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
        } else if f_reflect < simplex[1].1 {
            simplex[2] = (reflect, f_reflect);
        } else {
            let contract = (
                centroid.0 + 0.5 * (worst.0 .0 - centroid.0),
                centroid.1 + 0.5 * (worst.0 .1 - centroid.1),
            );
            let f_contract = cost(contract.0, contract.1);
            if f_contract < worst.1 {
                simplex[2] = (contract, f_contract);
            } else {
                // shrink toward the best vertex
                for k in 1..3 {
                    let p = (
                        best.0 .0 + 0.5 * (simplex[k].0 .0 - best.0 .0),
                        best.0 .1 + 0.5 * (simplex[k].0 .1 - best.0 .1),
                    );
                    simplex[k] = (p, cost(p.0, p.1));
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    (simplex[0].0, simplex[0].1)
}

fn stirap_optimum_at(
    total_time: f64,
    coupling: &CouplingConfig,
    sigma: f64,
    t_m: f64,
    fidelity: f64,
    seed: u64,
    cfg: &IntegratorConfig,
) -> Result<StirapOptimum> {
    let schedule = stirap_schedule(coupling, sigma, t_m, total_time, STIRAP_SAMPLES)?;
    let record = propagate_unitary(
        &schedule,
        &PureState::basis_state(crate::system::BasisLabel::Zero),
        cfg,
    )?;
    let leakage = leakage_report(&record);
    Ok(StirapOptimum { sigma, t_m, final_fidelity: fidelity, average_pe: leakage.average_pe, seed })
}

/// Simplex refinement of (σ, t_m) from an explicit starting point. The
/// transfer-fidelity landscape carries many disconnected local optima whose
/// fidelities tie at the numerical floor, so the relevant optimum is selected
/// by its starting neighborhood.
pub fn refine_stirap(
    total_time: f64,
    coupling: &CouplingConfig,
    start_sigma: f64,
    start_t_m: f64,
    cfg: &IntegratorConfig,
) -> Result<StirapOptimum> {
    if !(total_time.is_finite() && total_time > 0.0) {
        return Err(Error::param("total_time", total_time));
    }
    let cost = |sigma: f64, t_m: f64| -> f64 {
        -stirap_transfer_fidelity(coupling, sigma, t_m, total_time, cfg)
    };
    let ((sigma, t_m), best_cost) = nelder_mead_2d(
        cost,
        (start_sigma, start_t_m),
        (start_sigma * 0.05, (start_t_m * 0.05).max(total_time * 1e-3)),
        160,
    );
    stirap_optimum_at(total_time, coupling, sigma, t_m, -best_cost, DEFAULT_SEED, cfg)
}

/// Search for a (σ, t_m) pair maximizing the final transfer fidelity of
/// STIRAP at fixed total time and peak coupling: a 20x20 coarse grid over
/// σ ∈ [T/100, T], t_m ∈ [0, T/2] seeds simplex refinements from the best
/// `n_restarts` cells; the best refined candidate wins. Fully deterministic;
/// the seed is recorded in the output for provenance.
///
/// Transfer fidelities of distinct local optima tie at the numerical floor
/// (1−F below 1e−10 in several disconnected basins), so which basin wins
/// carries no physical information beyond F ≈ 1; `refine_stirap` picks a
/// specific basin when one is wanted.
pub fn optimize_stirap(
    total_time: f64,
    coupling: &CouplingConfig,
    n_restarts: usize,
    seed: u64,
    cfg: &IntegratorConfig,
) -> Result<StirapOptimum> {
    if !(total_time.is_finite() && total_time > 0.0) {
        return Err(Error::param("total_time", total_time));
    }
    let n_restarts = n_restarts.max(1);
    let n_grid = 20;
    let sigma_axis: Vec<f64> = (0..n_grid)
        .map(|k| total_time / 100.0 + (total_time - total_time / 100.0) * k as f64 / (n_grid - 1) as f64)
        .collect();
    let tm_axis: Vec<f64> = (0..n_grid)
        .map(|k| total_time / 2.0 * k as f64 / (n_grid - 1) as f64)
        .collect();

    let mut cells: Vec<((f64, f64), f64)> = (0..n_grid * n_grid)
        .into_par_iter()
        .map(|idx| {
            let sigma = sigma_axis[idx / n_grid];
            let t_m = tm_axis[idx % n_grid];
            (
                (sigma, t_m),
                stirap_transfer_fidelity(coupling, sigma, t_m, total_time, cfg),
            )
        })
        .collect();
    cells.sort_by(|a, b| b.1.total_cmp(&a.1));

    let cost = |sigma: f64, t_m: f64| -> f64 {
        -stirap_transfer_fidelity(coupling, sigma, t_m, total_time, cfg)
    };
    let refined = cells
        .iter()
        .take(n_restarts)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&(start, _)| {
            nelder_mead_2d(cost, start, (total_time * 0.02, total_time * 0.01), 120)
        })
        .collect::<Vec<_>>();
    let ((sigma, t_m), best_cost) = refined
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one restart");
    stirap_optimum_at(total_time, coupling, sigma, t_m, -best_cost, seed, cfg)
}
