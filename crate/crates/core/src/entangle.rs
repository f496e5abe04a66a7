//! Mode-1 reduced density matrix and its von Neumann entropy.
//!
//! Parity superselection restricts the reduced state to
//! `ρ = a I + b c₁†c₁`. The coefficients follow from matching
//! `Tr₁[ρ O] = ⟨G|O|G⟩` for `O ∈ {I, c₁†c₁}` on the local basis
//! `{|Ω⟩, c₁†|Ω⟩}`; no partial trace is taken.

use nalgebra::{Matrix2, Vector2};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::FockBasis;
use crate::linalg::C64;
use crate::model::ModelParams;
use crate::phase::{classify_phase, ground_state, GroundStateReport, NormKind, Phase};

/// Diagonal entries below `-NEGATIVE_TOL` are rejected as unphysical.
pub const NEGATIVE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensity {
    /// `diag(a, a + b)` on `{|Ω⟩, c₁†|Ω⟩}`.
    pub matrix: Matrix2<f64>,
    pub a_coeff: f64,
    pub b_coeff: f64,
    /// Ratio of empty to occupied weight; infinite when mode 1 is empty.
    pub chi: f64,
    /// In nats.
    pub entropy: f64,
}

impl ReducedDensity {
    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn probabilities(&self) -> [f64; 2] {
        [self.matrix[(0, 0)], self.matrix[(1, 1)]]
    }
}

fn expectation(v: &nalgebra::DVector<C64>, op: &crate::linalg::OperatorMatrix) -> C64 {
    (v.adjoint() * op * v)[(0, 0)]
}

/// `⟨G|c₁|G⟩`, which parity superselection forces to zero.
pub fn mode_one_coherence(g: &GroundStateReport) -> Result<C64> {
    let basis = FockBasis::new(2)?;
    Ok(expectation(g.vector(), &basis.annihilation(1)?))
}

pub fn reduced_density(g: &GroundStateReport) -> Result<ReducedDensity> {
    let basis = FockBasis::new(2)?;
    let v = g.vector();
    let norm = v.norm_squared();
    if norm == 0.0 {
        return Err(Error::InvalidState("zero ground-state vector".into()));
    }
    let identity = expectation(v, &basis.identity()).re / norm;
    let occupied = expectation(v, &basis.number_operator(1)?).re / norm;

    // Tr[(aI + bn) I] = 2a + b,  Tr[(aI + bn) n] = a + b.
    let system = Matrix2::new(2.0, 1.0, 1.0, 1.0);
    let coeffs = system
        .lu()
        .solve(&Vector2::new(identity, occupied))
        .ok_or_else(|| Error::Numeric("singular consistency system".into()))?;
    let (a, b) = (coeffs[0], coeffs[1]);
    let matrix = Matrix2::new(a, 0.0, 0.0, a + b);
    let chi = if a + b > 0.0 {
        a / (a + b)
    } else {
        f64::INFINITY
    };
    let entropy = entropy_of(&[a, a + b])?;
    Ok(ReducedDensity {
        matrix,
        a_coeff: a,
        b_coeff: b,
        chi,
        entropy,
    })
}

/// `χ = ((√(4αβ+1) + 1) / (2β))²` for the right-normalised delocalized state.
pub fn closed_form_chi(alpha: f64, beta: f64) -> f64 {
    (((4.0 * alpha * beta + 1.0).sqrt() + 1.0) / (2.0 * beta)).powi(2)
}

/// `-Σ p ln p` over the diagonal, with `0 ln 0 = 0`.
pub fn von_neumann_entropy(rho: &ReducedDensity) -> Result<f64> {
    entropy_of(&rho.probabilities())
}

pub fn entropy_of(probabilities: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &p in probabilities {
        if p < -NEGATIVE_TOL || !p.is_finite() {
            return Err(Error::InvalidState(format!(
                "diagonal entry {p} is not a probability"
            )));
        }
        if p > 0.0 {
            s -= p * p.ln();
        }
    }
    Ok(s.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileOutcome {
    Evaluated {
        branch: Phase,
        n1: f64,
        n2: f64,
        entropy: f64,
    },
    /// `αβ = ω² - ω`: the ground state is degenerate and not evaluated.
    Boundary,
    /// `4αβ + 1 < 0`.
    ComplexSpectrum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub alpha: f64,
    pub beta: f64,
    pub outcome: ProfileOutcome,
}

impl ProfilePoint {
    pub fn product(&self) -> f64 {
        self.alpha * self.beta
    }

    pub fn entropy(&self) -> Option<f64> {
        match self.outcome {
            ProfileOutcome::Evaluated { entropy, .. } => Some(entropy),
            _ => None,
        }
    }
}

/// `(α, β)` on the ray `α = ratio · β` (`β > 0`) with `αβ = product`.
pub fn point_for_product(product: f64, ratio: f64) -> Result<(f64, f64)> {
    let beta_sq = product / ratio;
    if beta_sq.is_nan() || beta_sq < 0.0 || !beta_sq.is_finite() {
        return Err(Error::Input(format!(
            "alpha * beta = {product} is unreachable on the ray alpha = {ratio} * beta"
        )));
    }
    let beta = beta_sq.sqrt();
    Ok((ratio * beta, beta))
}

/// Ground-state entropy of mode 1 at each `(α, β)`, in input order.
pub fn entropy_profile(
    omega: f64,
    points: &[(f64, f64)],
    norm_kind: NormKind,
) -> Result<Vec<ProfilePoint>> {
    if !(omega > 0.0 && omega < 0.5) {
        return Err(Error::Domain(format!(
            "omega must lie in (0, 1/2), got {omega}"
        )));
    }
    points
        .par_iter()
        .map(|&(alpha, beta)| {
            let p = ModelParams::new(omega, alpha, beta)?;
            let outcome = if p.discriminant() < 0.0 {
                ProfileOutcome::ComplexSpectrum
            } else if classify_phase(&p)? == Phase::Boundary {
                ProfileOutcome::Boundary
            } else {
                let g = ground_state(&p, norm_kind)?;
                let rho = reduced_density(&g)?;
                ProfileOutcome::Evaluated {
                    branch: g.branch,
                    n1: g.n1,
                    n2: g.n2,
                    entropy: rho.entropy,
                }
            };
            Ok(ProfilePoint {
                alpha,
                beta,
                outcome,
            })
        })
        .collect()
}
