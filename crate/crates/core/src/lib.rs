//! Numerical toolkit for the two-mode fermionic Swanson oscillator and its
//! many-body chain generalisation.
//!
//! * [`fock`]: Fock spaces and Jordan–Wigner fermion operators
//! * [`model`]: the 4×4 Hamiltonian, closed-form eigensystem, Dyson map
//! * [`biortho`]: bi-orthogonal eigendecomposition, exceptional-point scans
//! * [`phase`]: `(z, Δ)` parameters, ground-state crossings and phases
//! * [`entangle`]: mode-1 reduced density matrix and von Neumann entropy
//! * [`trotter`]: chain Hamiltonian, exact and Trotterized propagators

pub mod biortho;
pub mod entangle;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod model;
pub mod phase;
pub mod trotter;

pub use biortho::{decompose, scan_exceptional, Axis, BiorthoSystem, ExceptionalReport, ParamGrid};
pub use entangle::{reduced_density, von_neumann_entropy, ReducedDensity};
pub use error::{Error, Result};
pub use fock::{build_basis, FockBasis};
pub use linalg::{OperatorMatrix, C64};
pub use model::{
    build_hamiltonian, closed_form_spectrum, ClosedFormSpectrum, DysonPair, ModelParams, Region,
};
pub use phase::{ground_state, GroundStateReport, NormKind, Phase, ZDeltaParams};
pub use trotter::{
    build_chain, exact_propagator, trotter_error_scan, trotter_propagator, ChainParams,
    PropagatorPair,
};
