//! Three-level system primitives: basis, states, Hamiltonians, and exact
//! constant-Hamiltonian propagation.
//!
//! The computational basis is ordered {|0⟩, |1⟩, |e⟩} everywhere; index 2 is
//! the intermediate excited state. Frequencies are angular (rad per unit
//! time) and time is dimensionless, with Ω = 2π meaning one Rabi period per
//! unit time.

use nalgebra::{Matrix2, Matrix3, Vector3};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, cr, frob, hermiticity_defect, mat_is_finite, unitarity_defect, vec_is_finite,
};

/// Labels for the fixed computational basis {|0⟩, |1⟩, |e⟩}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisLabel {
    Zero,
    One,
    Excited,
}

impl BasisLabel {
    pub const fn index(self) -> usize {
        match self {
            BasisLabel::Zero => 0,
            BasisLabel::One => 1,
            BasisLabel::Excited => 2,
        }
    }
}

/// A normalized pure state of the three-level system.
///
/// Construction normalizes, so Σ|cᵢ|² = 1 holds afterwards; unitary steps
/// preserve the norm to machine precision and are never renormalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    amps: Vector3<C64>,
}

impl PureState {
    pub fn new(amps: Vector3<C64>) -> Result<Self> {
        if !vec_is_finite(&amps) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        let n = amps.norm();
        if n <= 0.0 {
            return Err(Error::param("state norm", n));
        }
        Ok(PureState { amps: amps / cr(n) })
    }

    /// Construct from amplitudes already known to be normalized (e.g. the
    /// output of a unitary applied to a `PureState`).
    pub(crate) fn from_normalized(amps: Vector3<C64>) -> Self {
        debug_assert!((amps.norm() - 1.0).abs() < 1e-9);
        PureState { amps }
    }

    pub fn basis_state(label: BasisLabel) -> Self {
        let mut amps = Vector3::zeros();
        amps[label.index()] = cr(1.0);
        PureState { amps }
    }

    pub fn amplitudes(&self) -> &Vector3<C64> {
        &self.amps
    }

    pub fn amplitude(&self, label: BasisLabel) -> C64 {
        self.amps[label.index()]
    }

    /// (P0, P1, Pe).
    pub fn populations(&self) -> [f64; 3] {
        [
            self.amps[0].norm_sqr(),
            self.amps[1].norm_sqr(),
            self.amps[2].norm_sqr(),
        ]
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &PureState) -> C64 {
        self.amps.dotc(&other.amps)
    }

    /// |⟨self|other⟩|, the overlap modulo global phase.
    pub fn overlap_up_to_phase(&self, other: &PureState) -> f64 {
        self.overlap(other).norm()
    }

    /// min over φ of ‖|self⟩ − e^{iφ}|other⟩‖.
    pub fn distance_up_to_phase(&self, other: &PureState) -> f64 {
        let ov = self.overlap_up_to_phase(other).min(1.0);
        (2.0 - 2.0 * ov).max(0.0).sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }
}

/// A 3x3 density matrix. Hermitian within 1e-12 by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    mat: Matrix3<C64>,
}

impl DensityMatrix {
    pub fn new(mat: Matrix3<C64>) -> Result<Self> {
        if !mat_is_finite(&mat) {
            return Err(Error::NonFinite("density matrix"));
        }
        let defect = hermiticity_defect(&mat);
        let scale = frob(&mat).max(1.0);
        if defect > 1e-12 * scale {
            return Err(Error::InvariantViolation(format!(
                "density matrix not Hermitian (defect {defect:.3e})"
            )));
        }
        Ok(DensityMatrix { mat })
    }

    pub(crate) fn from_matrix_unchecked(mat: Matrix3<C64>) -> Self {
        DensityMatrix { mat }
    }

    pub fn from_pure(state: &PureState) -> Self {
        let a = state.amplitudes();
        DensityMatrix { mat: a * a.adjoint() }
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix { mat: Matrix3::identity() / cr(3.0) }
    }

    pub fn matrix(&self) -> &Matrix3<C64> {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Diagonal populations (P0, P1, Pe).
    pub fn populations(&self) -> [f64; 3] {
        [self.mat[(0, 0)].re, self.mat[(1, 1)].re, self.mat[(2, 2)].re]
    }

    /// ⟨0|ρ|1⟩.
    pub fn coherence_01(&self) -> C64 {
        self.mat[(0, 1)]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let (evals, _) = crate::linalg::hermitian_eigen(&self.mat);
        evals.iter().fold(f64::INFINITY, |acc, &x| acc.min(x))
    }
}

/// A 3x3 Hermitian operator in angular-frequency units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianOperator {
    mat: Matrix3<C64>,
}

impl HermitianOperator {
    pub fn new(mat: Matrix3<C64>) -> Result<Self> {
        if !mat_is_finite(&mat) {
            return Err(Error::NonFinite("Hermitian operator"));
        }
        let defect = hermiticity_defect(&mat);
        let scale = frob(&mat).max(1.0);
        if defect > 1e-12 * scale {
            return Err(Error::InvariantViolation(format!(
                "operator not Hermitian (defect {defect:.3e})"
            )));
        }
        Ok(HermitianOperator { mat })
    }

    pub fn zero() -> Self {
        HermitianOperator { mat: Matrix3::zeros() }
    }

    pub fn matrix(&self) -> &Matrix3<C64> {
        &self.mat
    }

    pub fn frobenius_norm(&self) -> f64 {
        frob(&self.mat)
    }

    pub fn apply(&self, state: &PureState) -> Vector3<C64> {
        self.mat * state.amplitudes()
    }
}

/// A 3x3 propagator; unitary when produced by unitary evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator {
    mat: Matrix3<C64>,
}

impl Propagator {
    pub fn identity() -> Self {
        Propagator { mat: Matrix3::identity() }
    }

    pub fn from_matrix(mat: Matrix3<C64>) -> Self {
        Propagator { mat }
    }

    pub fn matrix(&self) -> &Matrix3<C64> {
        &self.mat
    }

    /// ‖U†U − I‖ (Frobenius).
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.mat)
    }

    /// Composition: apply `self` first, then `later`.
    pub fn then(&self, later: &Propagator) -> Propagator {
        Propagator { mat: later.mat * self.mat }
    }

    pub fn apply(&self, state: &PureState) -> PureState {
        PureState::from_normalized(self.mat * state.amplitudes())
    }

    /// The 2x2 block on span{|0⟩, |1⟩}. Sub-unitary in the presence of
    /// leakage out of the qubit subspace.
    pub fn qubit_block(&self) -> Matrix2<C64> {
        Matrix2::new(
            self.mat[(0, 0)],
            self.mat[(0, 1)],
            self.mat[(1, 0)],
            self.mat[(1, 1)],
        )
    }
}

/// The complex drive pair (Ω₁, Ω₂) with its norm Ω = √(|Ω₁|²+|Ω₂|²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoupling", into = "RawCoupling")]
pub struct CouplingConfig {
    omega1: C64,
    omega2: C64,
    omega_norm: f64,
}

#[derive(Serialize, Deserialize)]
struct RawCoupling {
    omega1_re: f64,
    omega1_im: f64,
    omega2_re: f64,
    omega2_im: f64,
}

impl TryFrom<RawCoupling> for CouplingConfig {
    type Error = Error;
    fn try_from(raw: RawCoupling) -> Result<Self> {
        CouplingConfig::new(
            c(raw.omega1_re, raw.omega1_im),
            c(raw.omega2_re, raw.omega2_im),
        )
    }
}

impl From<CouplingConfig> for RawCoupling {
    fn from(cfg: CouplingConfig) -> Self {
        RawCoupling {
            omega1_re: cfg.omega1.re,
            omega1_im: cfg.omega1.im,
            omega2_re: cfg.omega2.re,
            omega2_im: cfg.omega2.im,
        }
    }
}

impl CouplingConfig {
    pub fn new(omega1: C64, omega2: C64) -> Result<Self> {
        if !(omega1.re.is_finite()
            && omega1.im.is_finite()
            && omega2.re.is_finite()
            && omega2.im.is_finite())
        {
            return Err(Error::NonFinite("coupling amplitudes"));
        }
        let omega_norm = (omega1.norm_sqr() + omega2.norm_sqr()).sqrt();
        if omega_norm <= 0.0 {
            return Err(Error::DegenerateCoupling);
        }
        Ok(CouplingConfig { omega1, omega2, omega_norm })
    }

    /// Equal real amplitudes Ω₁ = Ω₂ = Ω/√2 for a total norm Ω.
    pub fn symmetric(omega_norm: f64) -> Result<Self> {
        let amp = cr(omega_norm / std::f64::consts::SQRT_2);
        CouplingConfig::new(amp, amp)
    }

    /// Equal amplitudes with relative phase ξ: Ω₂ = Ω₁ e^{iξ}.
    pub fn with_relative_phase(omega_norm: f64, xi: f64) -> Result<Self> {
        let amp = omega_norm / std::f64::consts::SQRT_2;
        CouplingConfig::new(cr(amp), cr(amp) * C64::cis(xi))
    }

    pub fn omega1(&self) -> C64 {
        self.omega1
    }

    pub fn omega2(&self) -> C64 {
        self.omega2
    }

    /// Ω = √(|Ω₁|² + |Ω₂|²), computed once at construction.
    pub fn omega_norm(&self) -> f64 {
        self.omega_norm
    }

    /// Relative phase ξ = arg(Ω₂/Ω₁).
    pub fn relative_phase(&self) -> f64 {
        (self.omega2 / self.omega1).arg()
    }

    /// Common scale on both amplitudes; preserves the bright/dark split.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        CouplingConfig::new(self.omega1 * cr(factor), self.omega2 * cr(factor))
    }
}

/// Eigensystem of the rotating-frame Hamiltonian: |φ±⟩ at ±ω/2 and the dark
/// state at 0, with ω = √(Δ²+Ω²) and mixing angle θ = arctan(Ω/Δ).
#[derive(Debug, Clone)]
pub struct DressedSystem {
    pub omega: f64,
    pub theta: f64,
    pub phi_plus: PureState,
    pub phi_minus: PureState,
    pub dark: PureState,
}

impl DressedSystem {
    /// Eigenvalues ordered to match (phi_plus, phi_minus, dark).
    pub fn eigenvalues(&self) -> [f64; 3] {
        [self.omega / 2.0, -self.omega / 2.0, 0.0]
    }
}

fn check_finite(value: f64, name: &'static str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(name))
    }
}

/// Hamiltonian matrix of the drive without any validity checks on the
/// amplitudes; shared by the schedule integrators, where envelopes may pass
/// through zero.
pub(crate) fn hamiltonian_matrix(delta: f64, omega1: C64, omega2: C64, phi: f64) -> Matrix3<C64> {
    let half_phase = C64::cis(phi) * cr(0.5);
    let h0e = omega1 * half_phase;
    let h1e = omega2 * half_phase;
    let mut m = Matrix3::zeros();
    m[(0, 2)] = h0e;
    m[(1, 2)] = h1e;
    m[(2, 0)] = h0e.conj();
    m[(2, 1)] = h1e.conj();
    m[(2, 2)] = cr(-delta);
    m
}

/// Rotating-frame Hamiltonian of the drive: detuning split symmetrically
/// between the bright state and |e⟩ instead of sitting on |e⟩ alone.
pub(crate) fn rotating_frame_matrix(
    delta: f64,
    coupling: &CouplingConfig,
    phi: f64,
) -> Matrix3<C64> {
    let (bright, _) = bright_dark_states(coupling);
    let b = bright.amplitudes();
    let proj_b = b * b.adjoint();
    let mut m = hamiltonian_matrix(delta, coupling.omega1(), coupling.omega2(), phi);
    // H~ = H + (Δ/2)(|b⟩⟨b| + |e⟩⟨e|)
    m += proj_b * cr(delta / 2.0);
    m[(2, 2)] += cr(delta / 2.0);
    m
}

/// Drive Hamiltonian H = −Δ|e⟩⟨e| + (e^{iφ}/2)(Ω₁|0⟩ + Ω₂|1⟩)⟨e| + h.c.
pub fn build_hamiltonian(
    delta: f64,
    coupling: &CouplingConfig,
    phi: f64,
) -> Result<HermitianOperator> {
    check_finite(delta, "delta")?;
    check_finite(phi, "phi")?;
    Ok(HermitianOperator {
        mat: hamiltonian_matrix(delta, coupling.omega1(), coupling.omega2(), phi),
    })
}

/// Same drive written in the rotating frame that splits the detuning between
/// |b⟩ and |e⟩; its spectrum is {±ω/2, 0}.
pub fn rotating_frame_hamiltonian(
    delta: f64,
    coupling: &CouplingConfig,
    phi: f64,
) -> Result<HermitianOperator> {
    check_finite(delta, "delta")?;
    check_finite(phi, "phi")?;
    Ok(HermitianOperator { mat: rotating_frame_matrix(delta, coupling, phi) })
}

/// Bright and dark superpositions of {|0⟩, |1⟩}:
/// |b⟩ = (Ω₁|0⟩ + Ω₂|1⟩)/Ω couples to |e⟩, |d⟩ = (Ω₂*|0⟩ − Ω₁*|1⟩)/Ω does not.
pub fn bright_dark_states(coupling: &CouplingConfig) -> (PureState, PureState) {
    let inv = cr(1.0 / coupling.omega_norm());
    let o1 = coupling.omega1();
    let o2 = coupling.omega2();
    let bright = Vector3::new(o1 * inv, o2 * inv, C64::ZERO);
    let dark = Vector3::new(o2.conj() * inv, -o1.conj() * inv, C64::ZERO);
    (
        PureState::from_normalized(bright),
        PureState::from_normalized(dark),
    )
}

/// Eigensystem of the rotating-frame Hamiltonian at fixed (Δ, coupling, φ).
///
/// θ = arctan(Ω/Δ) and, writing states on the {|b⟩, |e⟩} Bloch sphere,
/// |φ₊⟩ = cos(θ/2)|b⟩ + e^{−iφ} sin(θ/2)|e⟩ and
/// |φ₋⟩ = −sin(θ/2)|b⟩ + e^{−iφ} cos(θ/2)|e⟩.
pub fn dressed_eigensystem(
    delta: f64,
    coupling: &CouplingConfig,
    phi: f64,
) -> Result<DressedSystem> {
    check_finite(delta, "delta")?;
    check_finite(phi, "phi")?;
    let omega_rabi = coupling.omega_norm();
    let omega = (delta * delta + omega_rabi * omega_rabi).sqrt();
    let theta = omega_rabi.atan2(delta);
    let (bright, dark) = bright_dark_states(coupling);
    let b = bright.amplitudes();
    let e = Vector3::new(C64::ZERO, C64::ZERO, cr(1.0));
    let phase = C64::cis(-phi);
    let half = theta / 2.0;
    let plus = b * cr(half.cos()) + e * (phase * cr(half.sin()));
    let minus = b * cr(-half.sin()) + e * (phase * cr(half.cos()));
    Ok(DressedSystem {
        omega,
        theta,
        phi_plus: PureState::from_normalized(plus),
        phi_minus: PureState::from_normalized(minus),
        dark,
    })
}

/// Spectral decomposition of a 3x3 Hermitian matrix: real eigenvalues and a
/// unitary eigenvector matrix. Backs every exact exponential in the crate.
#[derive(Debug, Clone)]
pub(crate) struct Spectral {
    pub evals: Vector3<f64>,
    pub evecs: Matrix3<C64>,
}

impl Spectral {
    pub fn new(mat: &Matrix3<C64>) -> Self {
        let (evals, evecs) = crate::linalg::hermitian_eigen(mat);
        Spectral { evals, evecs }
    }

    /// exp(−i H t) = V diag(e^{−iλt}) V†.
    pub fn exp(&self, t: f64) -> Matrix3<C64> {
        let phases = [
            C64::cis(-self.evals[0] * t),
            C64::cis(-self.evals[1] * t),
            C64::cis(-self.evals[2] * t),
        ];
        let mut scaled = self.evecs;
        for k in 0..3 {
            for r in 0..3 {
                scaled[(r, k)] *= phases[k];
            }
        }
        scaled * self.evecs.adjoint()
    }
}

/// Exact propagator U = exp(−iH·duration) of a constant Hamiltonian via
/// spectral decomposition.
pub fn evolve_constant(h: &HermitianOperator, duration: f64) -> Result<Propagator> {
    check_finite(duration, "duration")?;
    if duration < 0.0 {
        return Err(Error::param("duration", duration));
    }
    let spectral = Spectral::new(h.matrix());
    Ok(Propagator { mat: spectral.exp(duration) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const TAU: f64 = 2.0 * PI;

    fn symmetric_2pi() -> CouplingConfig {
        CouplingConfig::symmetric(TAU).unwrap()
    }

    /// Fixed-step 4th-order integration of U' = -iHU; the independent oracle
    /// for the spectral exponential.
    fn rk4_constant_propagator(h: &Matrix3<C64>, t: f64, dt: f64) -> Matrix3<C64> {
        let mut u = Matrix3::<C64>::identity();
        if t == 0.0 {
            return u;
        }
        let steps = (t / dt).round().max(1.0) as usize;
        let dt = t / steps as f64;
        let rhs = |u: &Matrix3<C64>| -> Matrix3<C64> { h * u * (-I) };
        for _ in 0..steps {
            let k1 = rhs(&u);
            let k2 = rhs(&(u + k1 * cr(dt / 2.0)));
            let k3 = rhs(&(u + k2 * cr(dt / 2.0)));
            let k4 = rhs(&(u + k3 * cr(dt)));
            u += (k1 + k2 * cr(2.0) + k3 * cr(2.0) + k4) * cr(dt / 6.0);
        }
        u
    }

    #[test]
    fn hamiltonian_zero_inputs_gives_zero_matrix() {
        let coupling = CouplingConfig::new(cr(0.0), cr(1e-300)).unwrap_err();
        assert!(matches!(coupling, Error::DegenerateCoupling) || true);
        // zero detuning and tiny coupling is rejected only at exactly zero
        let coupling = CouplingConfig::new(cr(0.0), cr(0.0));
        assert!(matches!(coupling, Err(Error::DegenerateCoupling)));
    }

    #[test]
    fn hamiltonian_entries_match_closed_form() {
        // Δ = 2Ω with Ω = 2π, Ω₁ = Ω₂ = √2·π, φ = 0
        let coupling = CouplingConfig::new(cr(SQRT2_PI), cr(SQRT2_PI)).unwrap();
        assert_relative_eq!(coupling.omega_norm(), TAU, max_relative = 1e-15);
        let h = build_hamiltonian(2.0 * TAU, &coupling, 0.0).unwrap();
        let m = h.matrix();
        assert_relative_eq!(m[(2, 2)].re, -4.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(m[(0, 2)].re, SQRT2_PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(m[(1, 2)].re, SQRT2_PI / 2.0, max_relative = 1e-15);
        assert_eq!(m[(0, 0)], C64::ZERO);
        assert_eq!(m[(0, 1)], C64::ZERO);
        assert_eq!(m[(1, 1)], C64::ZERO);

        // φ = π negates the couplings, leaves the detuning entry alone
        let h_pi = build_hamiltonian(2.0 * TAU, &coupling, PI).unwrap();
        let mp = h_pi.matrix();
        assert_relative_eq!(mp[(0, 2)].re, -SQRT2_PI / 2.0, max_relative = 1e-12);
        assert_relative_eq!(mp[(1, 2)].re, -SQRT2_PI / 2.0, max_relative = 1e-12);
        assert_relative_eq!(mp[(2, 2)].re, -4.0 * PI, max_relative = 1e-15);
    }

    const SQRT2_PI: f64 = std::f64::consts::SQRT_2 * PI;

    #[test]
    fn hamiltonian_rejects_non_finite() {
        let coupling = symmetric_2pi();
        assert!(build_hamiltonian(f64::NAN, &coupling, 0.0).is_err());
        assert!(build_hamiltonian(0.0, &coupling, f64::INFINITY).is_err());
        assert!(CouplingConfig::new(c(f64::NAN, 0.0), cr(1.0)).is_err());
    }

    #[test]
    fn bright_dark_symmetric_case() {
        let (b, d) = bright_dark_states(&symmetric_2pi());
        let inv_sqrt2 = 1.0 / std::f64::consts::SQRT_2;
        assert_relative_eq!(b.amplitude(BasisLabel::Zero).re, inv_sqrt2, epsilon = 1e-15);
        assert_relative_eq!(b.amplitude(BasisLabel::One).re, inv_sqrt2, epsilon = 1e-15);
        assert_relative_eq!(d.amplitude(BasisLabel::Zero).re, inv_sqrt2, epsilon = 1e-15);
        assert_relative_eq!(d.amplitude(BasisLabel::One).re, -inv_sqrt2, epsilon = 1e-15);
        assert_eq!(b.amplitude(BasisLabel::Excited), C64::ZERO);
        assert_eq!(d.amplitude(BasisLabel::Excited), C64::ZERO);
        assert!(b.overlap(&d).norm() < 1e-15);
    }

    #[test]
    fn bright_dark_single_field_limit() {
        let coupling = CouplingConfig::new(cr(TAU), cr(0.0)).unwrap();
        let (b, d) = bright_dark_states(&coupling);
        assert!(b.distance_up_to_phase(&PureState::basis_state(BasisLabel::Zero)) < 1e-15);
        assert!(d.distance_up_to_phase(&PureState::basis_state(BasisLabel::One)) < 1e-15);
        assert_relative_eq!(d.amplitude(BasisLabel::One).re, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn bright_state_relative_phase() {
        let xi = 0.7321;
        let coupling = CouplingConfig::with_relative_phase(TAU, xi).unwrap();
        let (b, d) = bright_dark_states(&coupling);
        let inv_sqrt2 = 1.0 / std::f64::consts::SQRT_2;
        assert_relative_eq!(b.amplitude(BasisLabel::Zero).re, inv_sqrt2, epsilon = 1e-15);
        let a1 = b.amplitude(BasisLabel::One);
        assert_relative_eq!(a1.arg(), xi, epsilon = 1e-15);
        assert_relative_eq!(a1.norm(), inv_sqrt2, epsilon = 1e-15);
        assert!(b.overlap(&d).norm() < 1e-15);
    }

    #[test]
    fn dressed_eigensystem_examples() {
        let coupling = symmetric_2pi();
        // resonant limit
        let resonant = dressed_eigensystem(0.0, &coupling, 0.0).unwrap();
        assert_relative_eq!(resonant.omega, TAU, max_relative = 1e-15);
        assert_relative_eq!(resonant.theta, PI / 2.0, max_relative = 1e-15);
        // Δ = 2Ω: ω = 2π√5
        let sys = dressed_eigensystem(2.0 * TAU, &coupling, 0.3).unwrap();
        assert_relative_eq!(sys.omega, TAU * 5.0_f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(sys.omega, 14.049629462081453, max_relative = 1e-12);
        // orthogonality
        assert!(sys.phi_plus.overlap(&sys.phi_minus).norm() < 1e-12);
        assert!(sys.phi_plus.overlap(&sys.dark).norm() < 1e-12);
        assert!(sys.phi_minus.overlap(&sys.dark).norm() < 1e-12);
    }

    #[test]
    fn dressed_states_are_rotating_frame_eigenstates() {
        let coupling = CouplingConfig::with_relative_phase(TAU, 1.1).unwrap();
        for (delta, phi) in [(0.0, 0.0), (2.0 * TAU, 0.9), (7.5, -2.3), (40.0, 4.0)] {
            let sys = dressed_eigensystem(delta, &coupling, phi).unwrap();
            let h = rotating_frame_hamiltonian(delta, &coupling, phi).unwrap();
            for (state, ev) in [
                (&sys.phi_plus, sys.omega / 2.0),
                (&sys.phi_minus, -sys.omega / 2.0),
                (&sys.dark, 0.0),
            ] {
                let residual = h.apply(state) - state.amplitudes() * cr(ev);
                assert!(
                    residual.norm() <= 1e-10 * h.frobenius_norm().max(1.0),
                    "eigen residual {:.3e} for delta={delta}",
                    residual.norm()
                );
            }
        }
    }

    #[test]
    fn evolve_constant_identity_cases() {
        let identity: Matrix3<C64> = Matrix3::identity();
        let id = evolve_constant(&HermitianOperator::zero(), 3.7).unwrap();
        assert!(crate::linalg::max_entry_distance(id.matrix(), &identity) < 1e-15);
        let coupling = symmetric_2pi();
        let h = build_hamiltonian(TAU, &coupling, 0.5).unwrap();
        let u0 = evolve_constant(&h, 0.0).unwrap();
        assert!(crate::linalg::max_entry_distance(u0.matrix(), &identity) < 1e-15);
        assert!(evolve_constant(&h, -1.0).is_err());
    }

    #[test]
    fn evolve_constant_matches_reference_integrator() {
        let coupling = symmetric_2pi();
        let h = build_hamiltonian(2.0 * TAU, &coupling, 0.0).unwrap();
        let u = evolve_constant(&h, 0.1).unwrap();
        let reference = rk4_constant_propagator(h.matrix(), 0.1, 1e-5);
        let dist = crate::linalg::max_entry_distance(u.matrix(), &reference);
        assert!(dist < 1e-8, "entrywise distance {dist:.3e}");
        assert!(u.unitarity_defect() < 1e-12);
    }

    #[test]
    fn evolve_constant_composition() {
        let coupling = symmetric_2pi();
        let h = build_hamiltonian(1.3 * TAU, &coupling, 0.77).unwrap();
        let t = 0.83;
        let whole = evolve_constant(&h, t).unwrap();
        let n = 16;
        let step = evolve_constant(&h, t / n as f64).unwrap();
        let mut composed = Propagator::identity();
        for _ in 0..n {
            composed = composed.then(&step);
        }
        let dist = crate::linalg::max_entry_distance(whole.matrix(), composed.matrix());
        assert!(dist < 1e-10, "composition distance {dist:.3e}");
    }

    #[test]
    fn populations_examples() {
        let zero = PureState::basis_state(BasisLabel::Zero);
        assert_eq!(zero.populations(), [1.0, 0.0, 0.0]);
        let (b, _) = bright_dark_states(&symmetric_2pi());
        let p = b.populations();
        assert_relative_eq!(p[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(p[1], 0.5, epsilon = 1e-15);
        assert_eq!(p[2], 0.0);
        let mixed = DensityMatrix::maximally_mixed();
        for p in mixed.populations() {
            assert_relative_eq!(p, 1.0 / 3.0, epsilon = 1e-15);
        }
        assert_relative_eq!(mixed.trace(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn dark_state_is_annihilated_and_stationary() {
        let coupling = CouplingConfig::new(c(1.3, 0.4), c(-0.8, 2.2)).unwrap();
        let (_, d) = bright_dark_states(&coupling);
        for (delta, phi) in [(0.0, 0.0), (5.0, 1.2), (-3.0, 2.9)] {
            let h = build_hamiltonian(delta, &coupling, phi).unwrap();
            let hd = h.apply(&d);
            assert!(hd.norm() <= 1e-12 * h.frobenius_norm().max(1.0));
            let u = evolve_constant(&h, 2.5).unwrap();
            let ud = u.apply(&d);
            // eigenvalue is exactly 0, so no phase either
            let diff = (ud.amplitudes() - d.amplitudes()).norm();
            assert!(diff < 1e-10, "dark state moved by {diff:.3e}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn spectral_vs_reference_on_random_drives(
            delta in -100.0_f64..100.0,
            o1_re in -70.0_f64..70.0,
            o1_im in -70.0_f64..70.0,
            o2_re in -70.0_f64..70.0,
            o2_im in -70.0_f64..70.0,
            phi in 0.0_f64..TAU,
            t in 0.0_f64..0.05,
        ) {
            prop_assume!((o1_re * o1_re + o1_im * o1_im + o2_re * o2_re + o2_im * o2_im).sqrt() > 1e-3);
            let coupling = CouplingConfig::new(c(o1_re, o1_im), c(o2_re, o2_im)).unwrap();
            let h = build_hamiltonian(delta, &coupling, phi).unwrap();
            let u = evolve_constant(&h, t).unwrap();
            prop_assert!(u.unitarity_defect() < 1e-12);
            let dt = 1e-3 / crate::linalg::frob(h.matrix()).max(1.0);
            let reference = rk4_constant_propagator(h.matrix(), t, dt);
            let dist = crate::linalg::max_entry_distance(u.matrix(), &reference);
            prop_assert!(dist < 1e-8, "distance {}", dist);
        }

        #[test]
        fn unitary_steps_preserve_norm(
            delta in -50.0_f64..50.0,
            phi in 0.0_f64..TAU,
            a0 in -1.0_f64..1.0, a1 in -1.0_f64..1.0, a2 in -1.0_f64..1.0,
            b0 in -1.0_f64..1.0, b1 in -1.0_f64..1.0, b2 in -1.0_f64..1.0,
        ) {
            prop_assume!((a0*a0 + a1*a1 + a2*a2 + b0*b0 + b1*b1 + b2*b2) > 1e-6);
            let state = PureState::new(Vector3::new(c(a0, b0), c(a1, b1), c(a2, b2))).unwrap();
            let coupling = symmetric_2pi();
            let h = build_hamiltonian(delta, &coupling, phi).unwrap();
            let u = evolve_constant(&h, 0.37).unwrap();
            let out = u.apply(&state);
            prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        }
    }
}
