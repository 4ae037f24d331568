//! Evolution of states and propagators under a [`ControlSchedule`].
//!
//! Piecewise-constant schedules use exact spectral exponentials per segment,
//! subdivided only for recording. Sampled schedules step with exponentials of
//! the midpoint-interpolated Hamiltonian, so every step stays exactly unitary.
//! Dissipative runs integrate the Lindblad master equation with a classical
//! fixed-step 4th-order method. [`reference_propagator`] is a brute-force
//! integrator kept method-independent for use as a test oracle.

use std::io::Write;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{cr, I};
use crate::schemes::{ControlSchedule, ScheduleKind};
use crate::system::{hamiltonian_matrix, DensityMatrix, Propagator, PureState, Spectral};

/// Step and recording control for the schedule integrators.
///
/// `dt = None` picks min(2π/ω_max, shortest interval)/200 for unitary
/// stepping; the Lindblad path halves that again to keep its 4th-order error
/// comfortably below the trace/fidelity tolerances.
#[derive(Debug, Clone, Copy)]
pub struct IntegratorConfig {
    /// Fixed step for sampled and Lindblad evolution.
    pub dt: Option<f64>,
    /// Steps between recorded points in stepped methods.
    pub record_stride: usize,
    /// Target number of recorded points for exact piecewise propagation.
    pub target_record_points: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig { dt: None, record_stride: 1, target_record_points: 2000 }
    }
}

impl IntegratorConfig {
    pub(crate) fn step_for(&self, schedule: &ControlSchedule, divisor: f64) -> f64 {
        if let Some(dt) = self.dt {
            return dt;
        }
        let omega_max = schedule.max_dressed_frequency();
        let interval = schedule.min_interval();
        let period = if omega_max > 0.0 {
            (std::f64::consts::TAU / omega_max).min(interval)
        } else {
            interval
        };
        period / divisor
    }
}

/// Final state carried by an [`EvolutionRecord`].
#[derive(Debug, Clone)]
pub enum FinalState {
    Pure(PureState),
    Density(DensityMatrix),
}

/// Time-sampled populations and coherences of one run, plus the accumulated
/// propagator for unitary runs.
#[derive(Debug, Clone)]
pub struct EvolutionRecord {
    pub times: Vec<f64>,
    pub populations: Vec<[f64; 3]>,
    pub coherence_01: Vec<C64>,
    pub final_propagator: Option<Propagator>,
    pub final_state: FinalState,
}

impl EvolutionRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn total_duration(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    /// CSV with header `t,p0,p1,pe,re_c01,im_c01`, 12 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,p0,p1,pe,re_c01,im_c01")?;
        for (k, &t) in self.times.iter().enumerate() {
            let p = self.populations[k];
            let c = self.coherence_01[k];
            writeln!(
                w,
                "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}",
                t, p[0], p[1], p[2], c.re, c.im
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

struct Recorder {
    times: Vec<f64>,
    populations: Vec<[f64; 3]>,
    coherence_01: Vec<C64>,
}

impl Recorder {
    fn new() -> Self {
        Recorder { times: Vec::new(), populations: Vec::new(), coherence_01: Vec::new() }
    }

    fn push_pure(&mut self, t: f64, amps: &Vector3<C64>) {
        self.times.push(t);
        self.populations.push([
            amps[0].norm_sqr(),
            amps[1].norm_sqr(),
            amps[2].norm_sqr(),
        ]);
        self.coherence_01.push(amps[0] * amps[1].conj());
    }

    fn push_density(&mut self, t: f64, rho: &Matrix3<C64>) {
        self.times.push(t);
        self.populations.push([rho[(0, 0)].re, rho[(1, 1)].re, rho[(2, 2)].re]);
        self.coherence_01.push(rho[(0, 1)]);
    }
}

fn segment_hamiltonians(schedule: &ControlSchedule) -> Vec<(f64, f64, Matrix3<C64>)> {
    let ScheduleKind::PiecewiseConstant { segments } = &schedule.kind else {
        unreachable!("caller checks the schedule kind");
    };
    let o1 = schedule.coupling.omega1();
    let o2 = schedule.coupling.omega2();
    segments
        .iter()
        .map(|s| {
            let scale = cr(s.amp_scale);
            (
                s.duration,
                s.delta,
                hamiltonian_matrix(s.delta, o1 * scale, o2 * scale, s.phi),
            )
        })
        .collect()
}

fn sampled_hamiltonian(schedule: &ControlSchedule, t: f64) -> Matrix3<C64> {
    let ScheduleKind::Sampled { envelope } = &schedule.kind else {
        unreachable!("caller checks the schedule kind");
    };
    let (o1, o2, delta, phi) = envelope.values_at(t);
    hamiltonian_matrix(delta, o1, o2, phi)
}

fn check_initial(initial: &PureState) -> Result<()> {
    if (initial.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::InvariantViolation(format!(
            "initial state norm {} is not 1",
            initial.norm()
        )));
    }
    Ok(())
}

/// Evolve a pure state under the schedule, recording populations, the 0-1
/// coherence, and the accumulated propagator.
pub fn propagate_unitary(
    schedule: &ControlSchedule,
    initial: &PureState,
    cfg: &IntegratorConfig,
) -> Result<EvolutionRecord> {
    schedule.validate()?;
    check_initial(initial)?;
    let mut rec = Recorder::new();
    let mut u_total = Matrix3::<C64>::identity();
    let mut psi = *initial.amplitudes();
    rec.push_pure(0.0, &psi);

    match &schedule.kind {
        ScheduleKind::PiecewiseConstant { .. } => {
            let total = schedule.total_duration();
            let mut t0 = 0.0;
            for (duration, _, h) in segment_hamiltonians(schedule) {
                let spectral = Spectral::new(&h);
                let n_rec = ((cfg.target_record_points as f64 * duration / total).ceil()
                    as usize)
                    .max(2);
                for j in 1..=n_rec {
                    let tau = duration * j as f64 / n_rec as f64;
                    let u_tau = spectral.exp(tau);
                    rec.push_pure(t0 + tau, &(u_tau * psi));
                }
                let u_seg = spectral.exp(duration);
                psi = u_seg * psi;
                u_total = u_seg * u_total;
                t0 += duration;
            }
        }
        ScheduleKind::Sampled { .. } => {
            let total = schedule.total_duration();
            let dt = cfg.step_for(schedule, 200.0);
            let n_steps = (total / dt).ceil().max(1.0) as usize;
            let dt = total / n_steps as f64;
            for k in 0..n_steps {
                let t_mid = (k as f64 + 0.5) * dt;
                let h = sampled_hamiltonian(schedule, t_mid);
                let u_step = Spectral::new(&h).exp(dt);
                psi = u_step * psi;
                u_total = u_step * u_total;
                if (k + 1) % cfg.record_stride == 0 || k + 1 == n_steps {
                    rec.push_pure((k + 1) as f64 * dt, &psi);
                }
            }
        }
    }

    let final_propagator = Propagator::from_matrix(u_total);
    let defect = final_propagator.unitarity_defect();
    if defect > 1e-10 {
        return Err(Error::InvariantViolation(format!(
            "propagator unitarity defect {defect:.3e}"
        )));
    }
    Ok(EvolutionRecord {
        times: rec.times,
        populations: rec.populations,
        coherence_01: rec.coherence_01,
        final_propagator: Some(final_propagator),
        final_state: FinalState::Pure(PureState::from_normalized(psi)),
    })
}

/// The full propagator of a schedule, skipping all recording. Used by the
/// fidelity scans, where only the final unitary matters.
pub fn schedule_propagator(
    schedule: &ControlSchedule,
    cfg: &IntegratorConfig,
) -> Result<Propagator> {
    schedule.validate()?;
    let mut u_total = Matrix3::<C64>::identity();
    match &schedule.kind {
        ScheduleKind::PiecewiseConstant { .. } => {
            for (duration, _, h) in segment_hamiltonians(schedule) {
                u_total = Spectral::new(&h).exp(duration) * u_total;
            }
        }
        ScheduleKind::Sampled { .. } => {
            let total = schedule.total_duration();
            let dt = cfg.step_for(schedule, 200.0);
            let n_steps = (total / dt).ceil().max(1.0) as usize;
            let dt = total / n_steps as f64;
            for k in 0..n_steps {
                let h = sampled_hamiltonian(schedule, (k as f64 + 0.5) * dt);
                u_total = Spectral::new(&h).exp(dt) * u_total;
            }
        }
    }
    Ok(Propagator::from_matrix(u_total))
}

fn lindblad_rhs(h: &Matrix3<C64>, gamma: f64, rho: &Matrix3<C64>) -> Matrix3<C64> {
    let mut out = (h * rho - rho * h) * (-I);
    if gamma > 0.0 {
        // decay channels √γ|0⟩⟨e| and √γ|1⟩⟨e|
        let ree = rho[(2, 2)];
        out[(0, 0)] += ree * cr(gamma);
        out[(1, 1)] += ree * cr(gamma);
        for k in 0..3 {
            out[(2, k)] -= rho[(2, k)] * cr(gamma);
            out[(k, 2)] -= rho[(k, 2)] * cr(gamma);
        }
    }
    out
}

fn rk4_density_step(
    rho: &Matrix3<C64>,
    gamma: f64,
    dt: f64,
    h_at: impl Fn(f64) -> Matrix3<C64>,
    t: f64,
) -> Matrix3<C64> {
    let h0 = h_at(t);
    let h_mid = h_at(t + dt / 2.0);
    let h1 = h_at(t + dt);
    let k1 = lindblad_rhs(&h0, gamma, rho);
    let k2 = lindblad_rhs(&h_mid, gamma, &(rho + k1 * cr(dt / 2.0)));
    let k3 = lindblad_rhs(&h_mid, gamma, &(rho + k2 * cr(dt / 2.0)));
    let k4 = lindblad_rhs(&h1, gamma, &(rho + k3 * cr(dt)));
    let next = rho + (k1 + k2 * cr(2.0) + k3 * cr(2.0) + k4) * cr(dt / 6.0);
    // enforce Hermiticity against roundoff drift
    (next + next.adjoint()) * cr(0.5)
}

/// Integrate the Lindblad master equation
/// ρ̇ = −i[H,ρ] + Σₖ(LₖρLₖ† − ½{Lₖ†Lₖ, ρ}) with Lₖ = √γ|k⟩⟨e| for k ∈ {0,1}.
pub fn propagate_lindblad(
    schedule: &ControlSchedule,
    gamma: f64,
    initial: &DensityMatrix,
    cfg: &IntegratorConfig,
) -> Result<EvolutionRecord> {
    schedule.validate()?;
    if !gamma.is_finite() {
        return Err(Error::NonFinite("gamma"));
    }
    if gamma < 0.0 {
        return Err(Error::param("gamma", gamma));
    }
    let trace0 = initial.trace();
    let mut rho = *initial.matrix();
    let mut rec = Recorder::new();
    rec.push_density(0.0, &rho);

    let dt = cfg.step_for(schedule, 400.0);
    match &schedule.kind {
        ScheduleKind::PiecewiseConstant { .. } => {
            let mut t0 = 0.0;
            for (duration, _, h) in segment_hamiltonians(schedule) {
                let n_steps = (duration / dt).ceil().max(1.0) as usize;
                let dt_seg = duration / n_steps as f64;
                let h_at = |_t: f64| h;
                for k in 0..n_steps {
                    rho = rk4_density_step(&rho, gamma, dt_seg, h_at, 0.0);
                    if (k + 1) % cfg.record_stride == 0 || k + 1 == n_steps {
                        rec.push_density(t0 + (k + 1) as f64 * dt_seg, &rho);
                    }
                }
                t0 += duration;
            }
        }
        ScheduleKind::Sampled { .. } => {
            let total = schedule.total_duration();
            let n_steps = (total / dt).ceil().max(1.0) as usize;
            let dt = total / n_steps as f64;
            let h_at = |t: f64| sampled_hamiltonian(schedule, t);
            for k in 0..n_steps {
                rho = rk4_density_step(&rho, gamma, dt, &h_at, k as f64 * dt);
                if (k + 1) % cfg.record_stride == 0 || k + 1 == n_steps {
                    rec.push_density((k + 1) as f64 * dt, &rho);
                }
            }
        }
    }

    let trace_drift = (rho.trace().re - trace0).abs();
    if trace_drift > 1e-8 {
        return Err(Error::InvariantViolation(format!(
            "Lindblad trace drift {trace_drift:.3e}"
        )));
    }
    // final renormalization; the guard above keeps the correction tiny
    rho /= cr(rho.trace().re / trace0);
    Ok(EvolutionRecord {
        times: rec.times,
        populations: rec.populations,
        coherence_01: rec.coherence_01,
        final_propagator: None,
        final_state: FinalState::Density(DensityMatrix::from_matrix_unchecked(rho)),
    })
}

/// Brute-force 4th-order fixed-step integration of U′ = −iH(t)U with a step
/// 100x smaller than the default. Method-independent of the spectral path;
/// used as the oracle in tests.
pub fn reference_propagator(
    schedule: &ControlSchedule,
    cfg: &IntegratorConfig,
) -> Result<Propagator> {
    schedule.validate()?;
    let dt = cfg.step_for(schedule, 200.0) / 100.0;
    let mut u = Matrix3::<C64>::identity();

    let rk4_step = |u: &Matrix3<C64>, h_at: &dyn Fn(f64) -> Matrix3<C64>, t: f64, dt: f64| {
        let rhs = |h: &Matrix3<C64>, u: &Matrix3<C64>| h * u * (-I);
        let h0 = h_at(t);
        let h_mid = h_at(t + dt / 2.0);
        let h1 = h_at(t + dt);
        let k1 = rhs(&h0, u);
        let k2 = rhs(&h_mid, &(u + k1 * cr(dt / 2.0)));
        let k3 = rhs(&h_mid, &(u + k2 * cr(dt / 2.0)));
        let k4 = rhs(&h1, &(u + k3 * cr(dt)));
        u + (k1 + k2 * cr(2.0) + k3 * cr(2.0) + k4) * cr(dt / 6.0)
    };

    match &schedule.kind {
        ScheduleKind::PiecewiseConstant { .. } => {
            for (duration, _, h) in segment_hamiltonians(schedule) {
                let n_steps = (duration / dt).ceil().max(1.0) as usize;
                let dt_seg = duration / n_steps as f64;
                let h_at = move |_t: f64| h;
                for _ in 0..n_steps {
                    u = rk4_step(&u, &h_at, 0.0, dt_seg);
                }
            }
        }
        ScheduleKind::Sampled { .. } => {
            let total = schedule.total_duration();
            let n_steps = (total / dt).ceil().max(1.0) as usize;
            let dt = total / n_steps as f64;
            let h_at = |t: f64| sampled_hamiltonian(schedule, t);
            for k in 0..n_steps {
                u = rk4_step(&u, &h_at, k as f64 * dt, dt);
            }
        }
    }
    Ok(Propagator::from_matrix(u))
}
