//! `(z, Δ)` reparametrisation, reality bounds, ground-state crossings and
//! the localized/delocalized phase classification (`ω < 1/2`).

use std::fmt;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::fock::FockBasis;
use crate::linalg::{c, C64};
use crate::model::{branch_energies, ModelParams};

/// Distance from `αβ = ω² - ω` treated as the phase boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// `α = z - Δ`, `β = z + Δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZDeltaParams {
    pub z: f64,
    pub delta: f64,
}

pub fn to_zdelta(alpha: f64, beta: f64) -> ZDeltaParams {
    ZDeltaParams {
        z: 0.5 * (alpha + beta),
        delta: 0.5 * (beta - alpha),
    }
}

/// Returns `(α, β)`.
pub fn from_zdelta(p: ZDeltaParams) -> (f64, f64) {
    (p.z - p.delta, p.z + p.delta)
}

/// Real branch energies iff `4(z² - Δ²) >= -1`.
pub fn reality_condition(p: ZDeltaParams) -> bool {
    4.0 * (p.z * p.z - p.delta * p.delta) >= -1.0
}

/// `Δ² + ω² - ω`; the levels `ω` and `E^I` cross iff this is non-negative.
pub fn crossing_discriminant(omega: f64, delta: f64) -> f64 {
    delta * delta + omega * omega - omega
}

fn check_omega(omega: f64) -> Result<()> {
    if !(omega > 0.0 && omega < 0.5) {
        return Err(Error::Domain(format!(
            "omega must lie in (0, 1/2), got {omega}"
        )));
    }
    Ok(())
}

/// Crossings `z± = ±√(Δ² + ω² - ω)` of the `ω` level with `E^I`, or `None`
/// when the levels never cross.
pub fn crossing_points(omega: f64, delta: f64) -> Result<Option<(f64, f64)>> {
    check_omega(omega)?;
    let d = crossing_discriminant(omega, delta);
    Ok((d >= 0.0).then(|| (-d.sqrt(), d.sqrt())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NormKind {
    DiracLeft,
    #[default]
    DiracRight,
}

impl NormKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NormKind::DiracLeft => "DIRAC_LEFT",
            NormKind::DiracRight => "DIRAC_RIGHT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    /// Ground state `c₁†|Ω⟩` with energy `ω`.
    Localized,
    /// Ground state on the `E^I` branch, spread over both modes.
    Delocalized,
    /// On `αβ = ω² - ω` (classification only).
    Boundary,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Localized => "LOCALIZED",
            Phase::Delocalized => "DELOCALIZED",
            Phase::Boundary => "BOUNDARY",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateReport {
    pub branch: Phase,
    pub energy: f64,
    /// Unit-norm right eigenvector.
    pub vector_right: DVector<C64>,
    /// Unit-norm left eigenvector, stored as a column.
    pub vector_left: DVector<C64>,
    /// `⟨n₁⟩` over the vector selected by `norm_kind`.
    pub n1: f64,
    pub n2: f64,
    pub norm_kind: NormKind,
}

impl GroundStateReport {
    /// The Dirac-normalised vector selected by `norm_kind`.
    pub fn vector(&self) -> &DVector<C64> {
        match self.norm_kind {
            NormKind::DiracLeft => &self.vector_left,
            NormKind::DiracRight => &self.vector_right,
        }
    }
}

fn check_ground_state_domain(p: &ModelParams) -> Result<()> {
    check_omega(p.omega())?;
    if p.discriminant() < 0.0 {
        return Err(Error::Domain(format!(
            "spectrum is complex for 4αβ + 1 = {} < 0",
            p.discriminant()
        )));
    }
    Ok(())
}

pub fn classify_phase(p: &ModelParams) -> Result<Phase> {
    check_ground_state_domain(p)?;
    let threshold = p.omega() * p.omega() - p.omega();
    let ab = p.product();
    Ok(if (ab - threshold).abs() <= BOUNDARY_TOL {
        Phase::Boundary
    } else if ab < threshold {
        Phase::Localized
    } else {
        Phase::Delocalized
    })
}

/// The `(first, fourth)` components of the right and left eigenvectors of
/// the `{|Ω⟩, c₁†c₂†|Ω⟩}` block for eigenvalue `energy`. Of the two
/// equivalent expressions, the one with the larger norm is used so the axes
/// `α = 0` / `β = 0` stay well defined.
fn branch_components(alpha: f64, beta: f64, energy: f64) -> ((f64, f64), (f64, f64)) {
    let pick = |a: (f64, f64), b: (f64, f64)| {
        if a.0.hypot(a.1) >= b.0.hypot(b.1) {
            a
        } else {
            b
        }
    };
    // H v = E v: row 1 gives (α, E), row 4 gives (E - 1, β).
    let right = pick((energy - 1.0, beta), (alpha, energy));
    // w H = E w: column 4 gives (E - 1, α), column 1 gives (β, E).
    let left = pick((energy - 1.0, alpha), (beta, energy));
    (right, left)
}

fn unit_vector(components: [f64; 4]) -> DVector<C64> {
    let v = DVector::from_iterator(4, components.iter().map(|&x| c(x)));
    let norm = v.norm();
    v / c(norm)
}

fn occupation(basis: &FockBasis, mode: usize, v: &DVector<C64>) -> Result<f64> {
    let n = basis.number_operator(mode)?;
    Ok((v.adjoint() * n * v)[(0, 0)].re)
}

/// Ground state for a real spectrum and `ω < 1/2`, Dirac-normalised.
pub fn ground_state(p: &ModelParams, norm_kind: NormKind) -> Result<GroundStateReport> {
    let branch = classify_phase(p)?;
    let (vector_right, vector_left, energy) = match branch {
        Phase::Boundary => {
            return Err(Error::Degeneracy(format!(
                "alpha * beta = {} sits on the crossing omega^2 - omega",
                p.product()
            )))
        }
        Phase::Localized => {
            let v = unit_vector([0.0, 1.0, 0.0, 0.0]);
            (v.clone(), v, p.omega())
        }
        Phase::Delocalized => {
            let energy = branch_energies(p.alpha(), p.beta()).0.re;
            let (r, l) = branch_components(p.alpha(), p.beta(), energy);
            (
                unit_vector([r.0, 0.0, 0.0, r.1]),
                unit_vector([l.0, 0.0, 0.0, l.1]),
                energy,
            )
        }
    };
    let basis = FockBasis::new(2)?;
    let chosen = match norm_kind {
        NormKind::DiracLeft => &vector_left,
        NormKind::DiracRight => &vector_right,
    };
    let n1 = occupation(&basis, 1, chosen)?;
    let n2 = occupation(&basis, 2, chosen)?;
    Ok(GroundStateReport {
        branch,
        energy,
        vector_right,
        vector_left,
        n1,
        n2,
        norm_kind,
    })
}

/// Closed-form delocalized occupation
/// `[(√(4(z²-Δ²)+1) + 1)² / (4(z ∓ Δ)²) + 1]⁻¹`, `-` for the left norm.
pub fn delocalized_occupation(p: ZDeltaParams, norm_kind: NormKind) -> f64 {
    let root = (4.0 * (p.z * p.z - p.delta * p.delta) + 1.0).sqrt();
    let coupling = match norm_kind {
        NormKind::DiracLeft => p.z - p.delta,
        NormKind::DiracRight => p.z + p.delta,
    };
    1.0 / ((root + 1.0).powi(2) / (4.0 * coupling * coupling) + 1.0)
}
