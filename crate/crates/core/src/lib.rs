//! Simulation and analysis toolkit for three-level stimulated Raman
//! transition control.
//!
//! The library models a Λ-type system in which two lower states |0⟩ and |1⟩
//! couple to a shared intermediate state |e⟩ through a pair of drive fields
//! under two-photon resonance. It builds time-dependent control schedules for
//! three schemes — conventional adiabatic elimination (AE), a phase-shift
//! protocol that parks the evolving state in a dressed eigenstate and later
//! releases it by reversing the detuning, and STIRAP with Gaussian pulse
//! pairs — and evolves states, density matrices, and propagators under them.
//!
//! Modules:
//! - [`system`]: basis, Hamiltonian construction, bright/dark decomposition,
//!   dressed eigensystem, exact constant-Hamiltonian propagation.
//! - [`schemes`]: control-schedule constructors and the static error model.
//! - [`propagation`]: schedule evolution (exact segment exponentials,
//!   midpoint-sampled stepping, Lindblad master equation) plus a brute-force
//!   reference integrator used as a test oracle.
//! - [`analysis`]: leakage and fidelity metrics, robustness scans, Monte
//!   Carlo averaging, perturbative leakage predictors, and the STIRAP
//!   parameter search.
//! - [`two_qubit`]: cavity-mediated two-qubit gate synthesis through the
//!   single-excitation subspace mapping.

pub mod analysis;
mod error;
pub(crate) mod linalg;
pub mod parse;
pub mod propagation;
pub mod schemes;
pub mod system;
pub mod two_qubit;

pub use error::{Error, Result};
pub use system::{
    bright_dark_states, build_hamiltonian, dressed_eigensystem, evolve_constant,
    rotating_frame_hamiltonian, BasisLabel, CouplingConfig, DensityMatrix, DressedSystem,
    HermitianOperator, Propagator, PureState,
};
