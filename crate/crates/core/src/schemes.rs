//! Control schedules for the three schemes and the static error model.
//!
//! A schedule fixes the full time dependence of the drive: detuning Δ(t),
//! common phase φ(t), and the coupling pair (Ω₁(t), Ω₂(t)). Piecewise-constant
//! schedules list segments; STIRAP uses sampled Gaussian envelopes.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::cr;
use crate::system::CouplingConfig;

/// One piecewise-constant control interval. `amp_scale` multiplies both
/// coupling amplitudes, leaving the bright/dark split unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlSegment {
    pub duration: f64,
    pub delta: f64,
    pub phi: f64,
    pub amp_scale: f64,
}

/// Uniformly sampled drive envelopes: values at t = k·dt for k = 0..n−1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledEnvelope {
    pub dt: f64,
    #[serde(with = "serde_c64_vec")]
    pub omega1: Vec<C64>,
    #[serde(with = "serde_c64_vec")]
    pub omega2: Vec<C64>,
    pub delta: Vec<f64>,
    pub phi: Vec<f64>,
}

impl SampledEnvelope {
    pub fn len(&self) -> usize {
        self.omega1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega1.is_empty()
    }

    pub fn total_duration(&self) -> f64 {
        self.dt * (self.len().saturating_sub(1)) as f64
    }

    /// Linear interpolation of all four envelopes at time `t`, clamped to the
    /// sampled range.
    pub fn values_at(&self, t: f64) -> (C64, C64, f64, f64) {
        let n = self.len();
        let x = (t / self.dt).clamp(0.0, (n - 1) as f64);
        let k = (x.floor() as usize).min(n - 2);
        let frac = x - k as f64;
        let lerp_c = |v: &[C64]| v[k] + (v[k + 1] - v[k]) * cr(frac);
        let lerp_r = |v: &[f64]| v[k] + (v[k + 1] - v[k]) * frac;
        (
            lerp_c(&self.omega1),
            lerp_c(&self.omega2),
            lerp_r(&self.delta),
            lerp_r(&self.phi),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScheduleKind {
    PiecewiseConstant { segments: Vec<ControlSegment> },
    Sampled { envelope: SampledEnvelope },
}

/// The full time-dependent control specification for one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlSchedule {
    pub coupling: CouplingConfig,
    pub kind: ScheduleKind,
}

impl ControlSchedule {
    pub fn piecewise(coupling: CouplingConfig, segments: Vec<ControlSegment>) -> Result<Self> {
        let schedule = ControlSchedule {
            coupling,
            kind: ScheduleKind::PiecewiseConstant { segments },
        };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn sampled(coupling: CouplingConfig, envelope: SampledEnvelope) -> Result<Self> {
        let schedule = ControlSchedule { coupling, kind: ScheduleKind::Sampled { envelope } };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            ScheduleKind::PiecewiseConstant { segments } => {
                if segments.is_empty() {
                    return Err(Error::InvalidSchedule("no segments".into()));
                }
                for seg in segments {
                    if !(seg.duration.is_finite()
                        && seg.delta.is_finite()
                        && seg.phi.is_finite()
                        && seg.amp_scale.is_finite())
                    {
                        return Err(Error::InvalidSchedule("non-finite segment field".into()));
                    }
                    if seg.duration <= 0.0 {
                        return Err(Error::InvalidSchedule(format!(
                            "segment duration must be positive, got {}",
                            seg.duration
                        )));
                    }
                }
            }
            ScheduleKind::Sampled { envelope } => {
                let n = envelope.len();
                if n < 2 {
                    return Err(Error::InvalidSchedule("sampled envelope needs >= 2 samples".into()));
                }
                if envelope.omega2.len() != n
                    || envelope.delta.len() != n
                    || envelope.phi.len() != n
                {
                    return Err(Error::InvalidSchedule("envelope arrays differ in length".into()));
                }
                if !(envelope.dt.is_finite() && envelope.dt > 0.0) {
                    return Err(Error::InvalidSchedule(format!(
                        "sample spacing must be positive, got {}",
                        envelope.dt
                    )));
                }
                let finite = envelope.omega1.iter().chain(&envelope.omega2).all(|z| {
                    z.re.is_finite() && z.im.is_finite()
                }) && envelope.delta.iter().chain(&envelope.phi).all(|x| x.is_finite());
                if !finite {
                    return Err(Error::InvalidSchedule("non-finite envelope sample".into()));
                }
            }
        }
        Ok(())
    }

    pub fn total_duration(&self) -> f64 {
        match &self.kind {
            ScheduleKind::PiecewiseConstant { segments } => {
                segments.iter().map(|s| s.duration).sum()
            }
            ScheduleKind::Sampled { envelope } => envelope.total_duration(),
        }
    }

    /// Largest dressed frequency √(Δ²+Ω²) over the schedule; sets default
    /// integrator steps.
    pub fn max_dressed_frequency(&self) -> f64 {
        match &self.kind {
            ScheduleKind::PiecewiseConstant { segments } => segments
                .iter()
                .map(|s| {
                    let omega = self.coupling.omega_norm() * s.amp_scale.abs();
                    (s.delta * s.delta + omega * omega).sqrt()
                })
                .fold(0.0, f64::max),
            ScheduleKind::Sampled { envelope } => (0..envelope.len())
                .map(|k| {
                    let omega_sq =
                        envelope.omega1[k].norm_sqr() + envelope.omega2[k].norm_sqr();
                    (envelope.delta[k] * envelope.delta[k] + omega_sq).sqrt()
                })
                .fold(0.0, f64::max),
        }
    }

    /// Shortest segment duration (total duration for sampled schedules).
    pub fn min_interval(&self) -> f64 {
        match &self.kind {
            ScheduleKind::PiecewiseConstant { segments } => {
                segments.iter().map(|s| s.duration).fold(f64::INFINITY, f64::min)
            }
            ScheduleKind::Sampled { envelope } => envelope.total_duration(),
        }
    }

    /// Parse a schedule from its JSON document, enforcing all invariants.
    pub fn from_json(text: &str) -> Result<Self> {
        let schedule: ControlSchedule =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serialization cannot fail")
    }
}

/// Phase-shift control parameters: the parking phase φ_c ∈ (0, π) with
/// cos φ_c = Δ/(Δ+ω), and the drive time t_c = φ_c/ω that reaches the parked
/// eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseShiftParams {
    pub phi_c: f64,
    pub t_c: f64,
    pub omega: f64,
}

pub fn phase_shift_params(delta: f64, coupling: &CouplingConfig) -> Result<PhaseShiftParams> {
    if !delta.is_finite() {
        return Err(Error::NonFinite("delta"));
    }
    if delta < 0.0 {
        return Err(Error::param("delta", delta));
    }
    let omega_rabi = coupling.omega_norm();
    let omega = (delta * delta + omega_rabi * omega_rabi).sqrt();
    let phi_c = (delta / (delta + omega)).acos();
    Ok(PhaseShiftParams { phi_c, t_c: phi_c / omega, omega })
}

fn check_theta(theta: f64) -> Result<()> {
    if !theta.is_finite() {
        return Err(Error::NonFinite("theta"));
    }
    if theta <= 0.0 {
        return Err(Error::param("theta", theta));
    }
    Ok(())
}

/// Gate duration 2ϑ/(ω−Δ) realizing rotation angle ϑ = (ω−Δ)t/2.
fn gate_duration(delta: f64, coupling: &CouplingConfig, theta: f64) -> f64 {
    let omega_rabi = coupling.omega_norm();
    let omega = (delta * delta + omega_rabi * omega_rabi).sqrt();
    2.0 * theta / (omega - delta)
}

/// Conventional adiabatic-elimination drive: one segment at constant Δ with
/// φ = 0.
pub fn ae_schedule(delta: f64, coupling: &CouplingConfig, theta: f64) -> Result<ControlSchedule> {
    if !delta.is_finite() {
        return Err(Error::NonFinite("delta"));
    }
    check_theta(theta)?;
    let duration = gate_duration(delta, coupling, theta);
    ControlSchedule::piecewise(
        *coupling,
        vec![ControlSegment { duration, delta, phi: 0.0, amp_scale: 1.0 }],
    )
}

/// Phase-shift drive: run as AE for t_c, jump the common phase to φ_c to park
/// the bright component in a dressed eigenstate, then release it with a φ = π
/// segment under reversed detuning.
pub fn ps_schedule(delta: f64, coupling: &CouplingConfig, theta: f64) -> Result<ControlSchedule> {
    check_theta(theta)?;
    let params = phase_shift_params(delta, coupling)?;
    let mid = gate_duration(delta, coupling, theta);
    ControlSchedule::piecewise(
        *coupling,
        vec![
            ControlSegment { duration: params.t_c, delta, phi: 0.0, amp_scale: 1.0 },
            ControlSegment { duration: mid, delta, phi: params.phi_c, amp_scale: 1.0 },
            ControlSegment { duration: params.t_c, delta: -delta, phi: std::f64::consts::PI, amp_scale: 1.0 },
        ],
    )
}

/// Resonant STIRAP pulse pair on [0, T]:
/// Ω₁(t) = Ω₁ exp[−(t−T/2−t_m)²/σ²] and Ω₂(t) = Ω₂ exp[−(t−T/2+t_m)²/σ²],
/// so the Ω₂ pulse peaks first when t_m > 0.
pub fn stirap_schedule(
    coupling: &CouplingConfig,
    sigma: f64,
    t_m: f64,
    total_time: f64,
    n_samples: usize,
) -> Result<ControlSchedule> {
    if !(sigma.is_finite() && t_m.is_finite() && total_time.is_finite()) {
        return Err(Error::NonFinite("stirap parameters"));
    }
    if sigma <= 0.0 {
        return Err(Error::param("sigma", sigma));
    }
    if total_time <= 0.0 {
        return Err(Error::param("total_time", total_time));
    }
    if n_samples < 100 {
        return Err(Error::param("n_samples", n_samples as f64));
    }
    let dt = total_time / (n_samples - 1) as f64;
    let center = total_time / 2.0;
    let mut omega1 = Vec::with_capacity(n_samples);
    let mut omega2 = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        let t = k as f64 * dt;
        let a1 = (-((t - center - t_m) / sigma).powi(2)).exp();
        let a2 = (-((t - center + t_m) / sigma).powi(2)).exp();
        omega1.push(coupling.omega1() * cr(a1));
        omega2.push(coupling.omega2() * cr(a2));
    }
    ControlSchedule::sampled(
        *coupling,
        SampledEnvelope {
            dt,
            omega1,
            omega2,
            delta: vec![0.0; n_samples],
            phi: vec![0.0; n_samples],
        },
    )
}

/// Static laboratory offsets: the coupling norm becomes Ω+δΩ and every
/// programmed detuning is shifted by +δΔ.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorModel {
    pub delta_omega: f64,
    pub delta_delta: f64,
}

impl ErrorModel {
    pub fn new(delta_omega: f64, delta_delta: f64) -> Result<Self> {
        if !(delta_omega.is_finite() && delta_delta.is_finite()) {
            return Err(Error::NonFinite("error model"));
        }
        Ok(ErrorModel { delta_omega, delta_delta })
    }

    pub fn is_zero(&self) -> bool {
        self.delta_omega == 0.0 && self.delta_delta == 0.0
    }
}

/// Apply static errors to a schedule. Amplitudes scale by (Ω+δΩ)/Ω; the
/// detuning offset is additive to the programmed value, so a sign-reversed
/// segment runs at −Δ+δΔ. Nominal durations and phases are left untouched:
/// the controller does not know the error.
pub fn apply_static_errors(
    schedule: &ControlSchedule,
    errors: &ErrorModel,
) -> Result<ControlSchedule> {
    if !(errors.delta_omega.is_finite() && errors.delta_delta.is_finite()) {
        return Err(Error::NonFinite("error model"));
    }
    if errors.is_zero() {
        return Ok(schedule.clone());
    }
    let omega = schedule.coupling.omega_norm();
    let scale = (omega + errors.delta_omega) / omega;
    if scale <= 0.0 {
        return Err(Error::param("omega + delta_omega", omega + errors.delta_omega));
    }
    let coupling = schedule.coupling.scaled(scale)?;
    let kind = match &schedule.kind {
        ScheduleKind::PiecewiseConstant { segments } => ScheduleKind::PiecewiseConstant {
            segments: segments
                .iter()
                .map(|s| ControlSegment {
                    duration: s.duration,
                    delta: s.delta + errors.delta_delta,
                    phi: s.phi,
                    amp_scale: s.amp_scale,
                })
                .collect(),
        },
        ScheduleKind::Sampled { envelope } => ScheduleKind::Sampled {
            envelope: SampledEnvelope {
                dt: envelope.dt,
                omega1: envelope.omega1.iter().map(|z| z * cr(scale)).collect(),
                omega2: envelope.omega2.iter().map(|z| z * cr(scale)).collect(),
                delta: envelope.delta.iter().map(|d| d + errors.delta_delta).collect(),
                phi: envelope.phi.clone(),
            },
        },
    };
    Ok(ControlSchedule { coupling, kind })
}

mod serde_c64_vec {
    use num_complex::Complex64 as C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Pair {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<Pair> = v.iter().map(|z| Pair { re: z.re, im: z.im }).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        let pairs = Vec::<Pair>::deserialize(d)?;
        Ok(pairs.into_iter().map(|p| C64::new(p.re, p.im)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{bright_dark_states, dressed_eigensystem, evolve_constant};
    use crate::system::build_hamiltonian;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const TAU: f64 = 2.0 * PI;

    fn symmetric_2pi() -> CouplingConfig {
        CouplingConfig::symmetric(TAU).unwrap()
    }

    #[test]
    fn phase_shift_params_resonant() {
        let p = phase_shift_params(0.0, &symmetric_2pi()).unwrap();
        assert_relative_eq!(p.phi_c, PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(p.t_c, 0.25, max_relative = 1e-15);
        assert_relative_eq!(p.omega, TAU, max_relative = 1e-15);
    }

    #[test]
    fn phase_shift_params_delta_twice_omega() {
        let p = phase_shift_params(2.0 * TAU, &symmetric_2pi()).unwrap();
        // arccos(2/(2+sqrt(5)))
        let expected_phi = (2.0 / (2.0 + 5.0_f64.sqrt())).acos();
        assert_relative_eq!(p.phi_c, expected_phi, max_relative = 1e-15);
        assert_relative_eq!(p.phi_c, 1.0790840960571628, max_relative = 1e-12);
        assert_relative_eq!(p.t_c, expected_phi / (TAU * 5.0_f64.sqrt()), max_relative = 1e-15);
        assert_relative_eq!(p.t_c, 0.07680516407706715, max_relative = 1e-12);
    }

    #[test]
    fn phase_shift_params_validation() {
        assert!(phase_shift_params(-1.0, &symmetric_2pi()).is_err());
        assert!(phase_shift_params(f64::NAN, &symmetric_2pi()).is_err());
    }

    #[test]
    fn phi_c_decreases_monotonically_to_pi_over_3() {
        let coupling = symmetric_2pi();
        let mut last = phase_shift_params(0.0, &coupling).unwrap().phi_c;
        for ratio in [0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1e3, 1e4, 1e6] {
            let phi_c = phase_shift_params(ratio * TAU, &coupling).unwrap().phi_c;
            assert!(phi_c < last, "phi_c not decreasing at ratio {ratio}");
            assert!(phi_c > PI / 3.0, "phi_c crossed the limit at ratio {ratio}");
            last = phi_c;
        }
        assert_relative_eq!(last, PI / 3.0, max_relative = 1e-6);
    }

    #[test]
    fn parking_reaches_dressed_eigenstate() {
        // evolving |b⟩ under the φ=0 drive for exactly t_c lands on the
        // |φ₊⟩ eigenstate of the φ=φ_c drive, up to global phase
        let coupling = symmetric_2pi();
        for ratio in [0.0, 0.3, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0] {
            let delta = ratio * TAU;
            let params = phase_shift_params(delta, &coupling).unwrap();
            let (bright, _) = bright_dark_states(&coupling);
            let h = build_hamiltonian(delta, &coupling, 0.0).unwrap();
            let u = evolve_constant(&h, params.t_c).unwrap();
            let parked = u.apply(&bright);
            let dressed = dressed_eigensystem(delta, &coupling, params.phi_c).unwrap();
            let overlap = parked.overlap_up_to_phase(&dressed.phi_plus);
            assert!(
                overlap >= 1.0 - 1e-10,
                "parking overlap {overlap} at delta/omega = {ratio}"
            );
        }
    }

    #[test]
    fn parked_state_matches_papers_closed_form() {
        let coupling = symmetric_2pi();
        let delta = 2.0 * TAU;
        let params = phase_shift_params(delta, &coupling).unwrap();
        let (bright, _) = bright_dark_states(&coupling);
        let omega = params.omega;
        let half = params.phi_c / 2.0;
        // cos(φc/2)|b⟩ − i (sin(φc/2)/ω)(Δ|b⟩ + Ω|e⟩)
        let b = bright.amplitudes();
        let e = nalgebra::Vector3::new(C64::ZERO, C64::ZERO, cr(1.0));
        let closed = b * cr(half.cos())
            + (b * cr(delta) + e * cr(coupling.omega_norm()))
                * (C64::new(0.0, -1.0) * cr(half.sin() / omega));
        let closed_state = crate::system::PureState::new(closed).unwrap();
        let dressed = dressed_eigensystem(delta, &coupling, params.phi_c).unwrap();
        assert!(closed_state.overlap_up_to_phase(&dressed.phi_plus) >= 1.0 - 1e-12);
        // the paper's expression is already normalized
        assert_relative_eq!(closed.norm(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn ae_schedule_durations() {
        let coupling = symmetric_2pi();
        let delta = 2.0 * TAU;
        let sched = ae_schedule(delta, &coupling, PI).unwrap();
        // 2π/(ω−Δ) with ω = 2π√5: 1/(√5−2) = √5+2
        assert_relative_eq!(sched.total_duration(), 5.0_f64.sqrt() + 2.0, max_relative = 1e-12);
        assert_relative_eq!(sched.total_duration(), 4.23606797749979, max_relative = 1e-12);
        let double = ae_schedule(delta, &coupling, 2.0 * PI).unwrap();
        assert_relative_eq!(double.total_duration(), 2.0 * sched.total_duration(), max_relative = 1e-15);
        let half = ae_schedule(delta, &coupling, PI / 2.0).unwrap();
        assert_relative_eq!(half.total_duration(), 2.118033988749895, max_relative = 1e-12);
        assert!(ae_schedule(delta, &coupling, 0.0).is_err());
        assert!(ae_schedule(delta, &coupling, -1.0).is_err());
    }

    #[test]
    fn ps_schedule_structure_and_totals() {
        let coupling = symmetric_2pi();
        let delta = 2.0 * TAU;
        let params = phase_shift_params(delta, &coupling).unwrap();
        let sched = ps_schedule(delta, &coupling, PI).unwrap();
        let ScheduleKind::PiecewiseConstant { segments } = &sched.kind else {
            panic!("expected piecewise schedule");
        };
        assert_eq!(segments.len(), 3);
        assert_eq!(segments[0].phi, 0.0);
        assert_eq!(segments[1].phi, params.phi_c);
        assert_eq!(segments[2].phi, PI);
        assert_eq!(segments[0].delta, delta);
        assert_eq!(segments[1].delta, delta);
        assert_eq!(segments[2].delta, -delta);
        assert_eq!(segments[0].duration, params.t_c);
        assert_eq!(segments[2].duration, params.t_c);
        assert_relative_eq!(sched.total_duration(), 4.389678305653924, max_relative = 1e-12);
        // ps total minus 2 t_c is exactly the AE duration
        let ae = ae_schedule(delta, &coupling, PI).unwrap();
        assert_relative_eq!(
            sched.total_duration() - 2.0 * params.t_c,
            ae.total_duration(),
            max_relative = 1e-15
        );

        let sched20 = ps_schedule(20.0 * TAU, &coupling, PI).unwrap();
        assert_relative_eq!(sched20.total_duration(), 40.04163599490222, max_relative = 1e-12);
    }

    #[test]
    fn stirap_envelope_shapes() {
        let coupling = symmetric_2pi();
        // symmetric pulses when t_m = 0
        let sym = stirap_schedule(&coupling, 1.0, 0.0, 10.0, 501).unwrap();
        let ScheduleKind::Sampled { envelope } = &sym.kind else { panic!() };
        for k in 0..envelope.len() {
            assert_relative_eq!(envelope.omega1[k].re, envelope.omega2[k].re, max_relative = 1e-15);
        }

        // Fig.-3-style parameters: Ω₂ peaks before Ω₁
        let t = 80.02;
        let sched = stirap_schedule(&coupling, 15.6, 13.4, t, 4001).unwrap();
        let ScheduleKind::Sampled { envelope } = &sched.kind else { panic!() };
        let argmax = |v: &[C64]| {
            v.iter()
                .enumerate()
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                .unwrap()
                .0
        };
        let peak2 = argmax(&envelope.omega2) as f64 * envelope.dt;
        let peak1 = argmax(&envelope.omega1) as f64 * envelope.dt;
        assert_relative_eq!(peak2, t / 2.0 - 13.4, epsilon = envelope.dt);
        assert_relative_eq!(peak1, t / 2.0 + 13.4, epsilon = envelope.dt);
        assert_relative_eq!(peak2, 26.61, epsilon = 0.05);
        assert_relative_eq!(peak1, 53.41, epsilon = 0.05);
        // peak envelope value is the coupling amplitude itself
        let max1 = envelope.omega1.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert_relative_eq!(max1, coupling.omega1().norm(), max_relative = 1e-6);
        // resonant throughout
        assert!(envelope.delta.iter().all(|&d| d == 0.0));
        assert!(envelope.phi.iter().all(|&p| p == 0.0));

        assert!(stirap_schedule(&coupling, -1.0, 0.0, 10.0, 500).is_err());
        assert!(stirap_schedule(&coupling, 1.0, 0.0, -10.0, 500).is_err());
        assert!(stirap_schedule(&coupling, 1.0, 0.0, 10.0, 50).is_err());
    }

    #[test]
    fn static_errors_scale_and_shift() {
        let coupling = symmetric_2pi();
        let delta = 2.0 * TAU;
        let sched = ps_schedule(delta, &coupling, PI).unwrap();

        let unchanged = apply_static_errors(&sched, &ErrorModel::default()).unwrap();
        assert_eq!(sched, unchanged);

        let scaled = apply_static_errors(
            &sched,
            &ErrorModel::new(0.1 * TAU, 0.0).unwrap(),
        )
        .unwrap();
        assert_relative_eq!(scaled.coupling.omega_norm(), 1.1 * TAU, max_relative = 1e-12);

        let shifted = apply_static_errors(
            &sched,
            &ErrorModel::new(0.0, 0.05 * TAU).unwrap(),
        )
        .unwrap();
        let ScheduleKind::PiecewiseConstant { segments } = &shifted.kind else { panic!() };
        assert_relative_eq!(segments[0].delta, delta + 0.05 * TAU, max_relative = 1e-15);
        // reversed segment keeps the additive offset: −Δ + δΔ
        assert_relative_eq!(segments[2].delta, -delta + 0.05 * TAU, max_relative = 1e-15);
        // nominal durations and phases untouched
        assert_eq!(segments[0].duration, phase_shift_params(delta, &coupling).unwrap().t_c);

        let too_negative = ErrorModel::new(-2.0 * TAU, 0.0).unwrap();
        assert!(apply_static_errors(&sched, &too_negative).is_err());
    }

    #[test]
    fn schedule_json_round_trip_exact() {
        let coupling = CouplingConfig::with_relative_phase(TAU, 0.41).unwrap();
        let sched = ps_schedule(1.37 * TAU, &coupling, 2.113).unwrap();
        let json = sched.to_json();
        let back = ControlSchedule::from_json(&json).unwrap();
        assert_eq!(sched, back);

        let stirap = stirap_schedule(&coupling, 0.75, 0.175, 4.39, 200).unwrap();
        let back = ControlSchedule::from_json(&stirap.to_json()).unwrap();
        assert_eq!(stirap, back);
    }

    #[test]
    fn schedule_json_rejects_invalid() {
        assert!(ControlSchedule::from_json("{}").is_err());
        assert!(ControlSchedule::from_json("not json").is_err());
        let bad = r#"{
            "coupling": {"omega1_re": 0.0, "omega1_im": 0.0, "omega2_re": 0.0, "omega2_im": 0.0},
            "kind": {"type": "piecewise_constant", "segments": []}
        }"#;
        assert!(ControlSchedule::from_json(bad).is_err());
        let negative_duration = r#"{
            "coupling": {"omega1_re": 1.0, "omega1_im": 0.0, "omega2_re": 1.0, "omega2_im": 0.0},
            "kind": {"type": "piecewise_constant",
                     "segments": [{"duration": -1.0, "delta": 0.0, "phi": 0.0, "amp_scale": 1.0}]}
        }"#;
        assert!(ControlSchedule::from_json(negative_duration).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn json_round_trip_is_bitwise_lossless(
            o1 in -50.0_f64..50.0,
            xi in 0.0_f64..TAU,
            delta in 0.0_f64..300.0,
            theta in 1e-3_f64..8.0,
            ps in proptest::bool::ANY,
        ) {
            prop_assume!(o1.abs() > 1e-3);
            let coupling = CouplingConfig::new(cr(o1), cr(o1) * C64::cis(xi)).unwrap();
            let sched = if ps {
                ps_schedule(delta, &coupling, theta).unwrap()
            } else {
                ae_schedule(delta, &coupling, theta).unwrap()
            };
            let back = ControlSchedule::from_json(&sched.to_json()).unwrap();
            // bitwise equality of every float survives the round trip
            prop_assert_eq!(sched, back);
        }
    }
}
