//! The two-mode fermionic Swanson Hamiltonian
//! `H = ω n₁ + (1-ω) n₂ + α c₁†c₂† + β c₂c₁` and its closed-form spectrum.
//!
//! Matrices follow the four-state layout `|Ω⟩, c₁†|Ω⟩, c₂†|Ω⟩, c₁†c₂†|Ω⟩`
//! with `H[0,3] = α` and `H[3,0] = β`. In the column-ket convention of
//! [`crate::fock`] this is the transpose of the literal operator sum, see
//! [`operator_hamiltonian`].

use std::fmt;

use nalgebra::{Matrix4, RowVector4, Vector4};

use crate::error::{Error, Result};
use crate::fock::FockBasis;
use crate::linalg::{c, OperatorMatrix, C64};

/// `|4αβ + 1|` at or below this is treated as lying on the exceptional curve.
pub const EXCEPTIONAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    omega: f64,
    alpha: f64,
    beta: f64,
}

impl ModelParams {
    /// `omega` must lie in `(0, 1)`; the second mode has frequency `1 - omega`.
    pub fn new(omega: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(omega > 0.0 && omega < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "omega must lie in (0, 1), got {omega}"
            )));
        }
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "alpha and beta must be finite, got ({alpha}, {beta})"
            )));
        }
        Ok(Self { omega, alpha, beta })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `αβ`
    pub fn product(&self) -> f64 {
        self.alpha * self.beta
    }

    /// `4αβ + 1`; the branch energies are real iff this is non-negative.
    pub fn discriminant(&self) -> f64 {
        discriminant(self.alpha, self.beta)
    }

    pub fn is_hermitian(&self) -> bool {
        self.alpha == self.beta
    }
}

pub fn discriminant(alpha: f64, beta: f64) -> f64 {
    4.0 * alpha * beta + 1.0
}

/// `(E^I, E^II) = (1 ∓ √(4αβ+1)) / 2` with the principal square root, so that
/// in the complex regime `Im E^I <= 0` and the two are conjugate.
pub fn branch_energies(alpha: f64, beta: f64) -> (C64, C64) {
    let root = c(discriminant(alpha, beta)).sqrt();
    ((c(1.0) - root) * 0.5, (c(1.0) + root) * 0.5)
}

pub fn build_hamiltonian(p: &ModelParams) -> OperatorMatrix {
    let mut h = OperatorMatrix::zeros(4, 4);
    h[(0, 3)] = c(p.alpha);
    h[(3, 0)] = c(p.beta);
    h[(1, 1)] = c(p.omega);
    h[(2, 2)] = c(1.0 - p.omega);
    h[(3, 3)] = c(1.0);
    h
}

/// The same Hamiltonian assembled from Fock-space operators: the transpose
/// of `ω n₁ + (1-ω) n₂ + α c₁†c₂† + β c₂c₁` in the column-ket convention.
pub fn operator_hamiltonian(p: &ModelParams) -> Result<OperatorMatrix> {
    let basis = FockBasis::new(2)?;
    let (c1, c2) = (basis.annihilation(1)?, basis.annihilation(2)?);
    let (c1d, c2d) = (c1.adjoint(), c2.adjoint());
    let literal = basis.number_operator(1)? * c(p.omega)
        + basis.number_operator(2)? * c(1.0 - p.omega)
        + c1d * c2d * c(p.alpha)
        + c2 * c1 * c(p.beta);
    Ok(literal.transpose())
}

/// Eigenvalues and eigenvectors exactly as the closed-form expressions give
/// them: branch vectors carry a unit fourth component and are not normalised.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormSpectrum {
    /// `E^I, E^II, E^III, E^IV`
    pub energies: [C64; 4],
    pub right_vectors: [Vector4<C64>; 4],
    pub left_vectors: [RowVector4<C64>; 4],
    /// `4αβ + 1`
    pub discriminant: f64,
}

impl ClosedFormSpectrum {
    pub fn e1(&self) -> C64 {
        self.energies[0]
    }
    pub fn e2(&self) -> C64 {
        self.energies[1]
    }
    pub fn e3(&self) -> C64 {
        self.energies[2]
    }
    pub fn e4(&self) -> C64 {
        self.energies[3]
    }

    pub fn is_real(&self) -> bool {
        self.discriminant >= 0.0
    }
}

pub fn closed_form_spectrum(p: &ModelParams) -> Result<ClosedFormSpectrum> {
    if p.alpha == 0.0 {
        return Err(Error::DegenerateFormula(
            "alpha = 0 (left vectors divide by alpha)",
        ));
    }
    if p.beta == 0.0 {
        return Err(Error::DegenerateFormula(
            "beta = 0 (right vectors divide by beta)",
        ));
    }
    let root = c(p.discriminant()).sqrt();
    let (e1, e2) = branch_energies(p.alpha, p.beta);
    let zero = c(0.0);
    let one = c(1.0);

    let right_first_1 = -(root + 1.0) / (2.0 * p.beta);
    let right_first_2 = -(one - root) / (2.0 * p.beta);
    let left_first_1 = -(root + 1.0) / (2.0 * p.alpha);
    let left_first_2 = -(one - root) / (2.0 * p.alpha);

    Ok(ClosedFormSpectrum {
        energies: [e1, e2, c(p.omega), c(1.0 - p.omega)],
        right_vectors: [
            Vector4::new(right_first_1, zero, zero, one),
            Vector4::new(right_first_2, zero, zero, one),
            Vector4::new(zero, one, zero, zero),
            Vector4::new(zero, zero, one, zero),
        ],
        left_vectors: [
            RowVector4::new(left_first_1, zero, zero, one),
            RowVector4::new(left_first_2, zero, zero, one),
            RowVector4::new(zero, one, zero, zero),
            RowVector4::new(zero, zero, one, zero),
        ],
        discriminant: p.discriminant(),
    })
}

/// Bi-orthogonal norms `⟨ψ_L|ψ_R⟩` of the branch states I and II:
/// `1 + (1 ± √(4αβ+1))² / (4αβ)`. Both vanish on the exceptional curve.
pub fn biortho_norms(p: &ModelParams) -> Result<(f64, f64)> {
    let ab = p.product();
    if ab == 0.0 {
        return Err(Error::DegenerateFormula("alpha * beta = 0"));
    }
    let d = p.discriminant();
    if d < 0.0 {
        return Err(Error::Domain(format!(
            "bi-orthogonal norms are complex for 4αβ + 1 = {d} < 0"
        )));
    }
    let root = d.sqrt();
    let norm = |s: f64| 1.0 + (1.0 + s * root).powi(2) / (4.0 * ab);
    Ok((norm(1.0), norm(-1.0)))
}

/// Similarity transform `η` and its Hermitian image `h = η⁻¹ H η`.
#[derive(Debug, Clone, PartialEq)]
pub struct DysonPair {
    pub eta: Matrix4<f64>,
    pub hermitian_h: Matrix4<f64>,
}

pub fn dyson_map(p: &ModelParams) -> Result<DysonPair> {
    let ab = p.product();
    if ab <= 0.0 {
        return Err(Error::Domain(format!(
            "Dyson map exists only for alpha * beta > 0, got {ab}"
        )));
    }
    let root = ab.sqrt();
    #[rustfmt::skip]
    let eta = Matrix4::new(
        1.0, 0.0, 0.0, p.alpha - root,
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 0.0,
        root - p.beta, 0.0, 0.0, 1.0,
    );
    #[rustfmt::skip]
    let hermitian_h = Matrix4::new(
        0.0, 0.0, 0.0, root,
        0.0, p.omega, 0.0, 0.0,
        0.0, 0.0, 1.0 - p.omega, 0.0,
        root, 0.0, 0.0, 1.0,
    );
    Ok(DysonPair { eta, hermitian_h })
}

impl DysonPair {
    /// `η⁻¹ H η` evaluated numerically.
    pub fn transform(&self, h: &Matrix4<f64>) -> Result<Matrix4<f64>> {
        let inv = self
            .eta
            .try_inverse()
            .ok_or_else(|| Error::Numeric("Dyson map is singular".into()))?;
        Ok(inv * h * self.eta)
    }
}

/// Real part of [`build_hamiltonian`] as a fixed-size matrix.
pub fn real_hamiltonian(p: &ModelParams) -> Matrix4<f64> {
    #[rustfmt::skip]
    let h = Matrix4::new(
        0.0, 0.0, 0.0, p.alpha,
        0.0, p.omega, 0.0, 0.0,
        0.0, 0.0, 1.0 - p.omega, 0.0,
        p.beta, 0.0, 0.0, 1.0,
    );
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// `αβ > 0`: real spectrum, positive bi-orthogonal norms.
    RealPositiveNorm,
    /// `4αβ + 1 > 0`, `αβ < 0`: real spectrum, indefinite norms.
    RealIndefiniteNorm,
    /// `4αβ + 1 = 0` within [`EXCEPTIONAL_TOL`].
    Exceptional,
    /// `4αβ + 1 < 0`.
    Complex,
    /// `α = 0` or `β = 0`.
    Degenerate,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::RealPositiveNorm => "REAL_POSITIVE_NORM",
            Region::RealIndefiniteNorm => "REAL_INDEFINITE_NORM",
            Region::Exceptional => "EXCEPTIONAL",
            Region::Complex => "COMPLEX",
            Region::Degenerate => "DEGENERATE",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn parameter_region(alpha: f64, beta: f64) -> Region {
    let d = discriminant(alpha, beta);
    if alpha == 0.0 || beta == 0.0 {
        Region::Degenerate
    } else if d.abs() <= EXCEPTIONAL_TOL {
        Region::Exceptional
    } else if d < 0.0 {
        Region::Complex
    } else if alpha * beta > 0.0 {
        Region::RealPositiveNorm
    } else {
        Region::RealIndefiniteNorm
    }
}
