//! Open fermionic chains `H̃ = Σ_j h_j` and their first-order Trotterized
//! propagators.
//!
//! Bond `j` carries `ω_j n_j` together with the pair terms `α_j` and `β_j`
//! on modes `j, j + 1`; the last site's `ω_L n_L` is a term of its own.
//! Matrices follow the same convention as [`crate::model::build_hamiltonian`]:
//! each term is the transpose of its literal operator form, so a two-site
//! chain with `ω = (ω, 1 - ω)` reproduces the 4×4 model exactly.
//!
//! A Trotter step applies `exp(-i h_1 t/N)` first and the last site's factor
//! last.

use rayon::prelude::*;

use crate::biortho::decompose;
use crate::error::{Error, Result};
use crate::fock::FockBasis;
use crate::linalg::{
    c, ensure_finite, ensure_square, matrix_exp, matrix_power, spectral_norm, OperatorMatrix, C64,
};

pub const MAX_SITES: usize = 10;

/// Tolerance on `U(t) = U(t/2)²` and on eigenbasis completeness.
pub const PROPAGATOR_TOL: f64 = 1e-8;

/// Errors at or below this are treated as round-off when fitting slopes.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ChainParams {
    omegas: Vec<f64>,
    alphas: Vec<f64>,
    betas: Vec<f64>,
}

impl ChainParams {
    pub fn new(omegas: Vec<f64>, alphas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        let sites = omegas.len();
        if !(2..=MAX_SITES).contains(&sites) {
            return Err(Error::Size {
                what: "chain length",
                value: sites,
                min: 2,
                max: MAX_SITES,
            });
        }
        if alphas.len() != sites - 1 || betas.len() != sites - 1 {
            return Err(Error::Shape(format!(
                "{sites} sites need {} bond couplings, got {} alphas and {} betas",
                sites - 1,
                alphas.len(),
                betas.len()
            )));
        }
        if omegas
            .iter()
            .chain(&alphas)
            .chain(&betas)
            .any(|x| !x.is_finite())
        {
            return Err(Error::InvalidParameter(
                "chain parameters must be finite".into(),
            ));
        }
        Ok(Self {
            omegas,
            alphas,
            betas,
        })
    }

    /// Uniform couplings on every site and bond.
    pub fn uniform(sites: usize, omega: f64, alpha: f64, beta: f64) -> Result<Self> {
        let bonds = sites.saturating_sub(1);
        Self::new(vec![omega; sites], vec![alpha; bonds], vec![beta; bonds])
    }

    pub fn site_count(&self) -> usize {
        self.omegas.len()
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// All pair couplings vanish, so every term is diagonal.
    pub fn is_commuting(&self) -> bool {
        self.alphas.iter().chain(&self.betas).all(|&x| x == 0.0)
    }
}

/// A term acting on `width` consecutive modes starting at `first_mode`
/// (1-based), stored as a `2^width` block on the local Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalTerm {
    pub first_mode: usize,
    pub width: usize,
    pub block: OperatorMatrix,
}

impl LocalTerm {
    /// `I ⊗ block ⊗ I` on `mode_count` modes.
    pub fn embed(&self, mode_count: usize) -> Result<OperatorMatrix> {
        embed_block(&self.block, self.first_mode, self.width, mode_count)
    }

    /// `exp(scale · block)`, embedded.
    pub fn embedded_exp(&self, scale: C64, mode_count: usize) -> Result<OperatorMatrix> {
        embed_block(
            &matrix_exp(&(&self.block * scale))?,
            self.first_mode,
            self.width,
            mode_count,
        )
    }
}

fn embed_block(
    block: &OperatorMatrix,
    first_mode: usize,
    width: usize,
    mode_count: usize,
) -> Result<OperatorMatrix> {
    let local_dim = 1usize << width;
    if block.nrows() != local_dim || block.ncols() != local_dim {
        return Err(Error::Shape(format!(
            "block is {}x{}, expected {local_dim}x{local_dim}",
            block.nrows(),
            block.ncols()
        )));
    }
    if first_mode == 0 || first_mode + width - 1 > mode_count {
        return Err(Error::Index {
            what: "first mode (1-based)",
            index: first_mode,
            len: mode_count,
        });
    }
    let dim = 1usize << mode_count;
    let shift = first_mode - 1;
    let mask = (local_dim - 1) << shift;
    let mut m = OperatorMatrix::zeros(dim, dim);
    for col in 0..dim {
        let rest = col & !mask;
        let l = (col & mask) >> shift;
        for k in 0..local_dim {
            let z = block[(k, l)];
            if z != C64::new(0.0, 0.0) {
                m[(rest | (k << shift), col)] = z;
            }
        }
    }
    Ok(m)
}

/// `h_1, …, h_{L-1}` on bonds, then `ω_L n_L`.
pub fn chain_terms(p: &ChainParams) -> Result<Vec<LocalTerm>> {
    let pair = FockBasis::new(2)?;
    let (c1, c2) = (pair.annihilation(1)?, pair.annihilation(2)?);
    let n1 = pair.number_operator(1)?;
    let mut terms: Vec<LocalTerm> = (0..p.site_count() - 1)
        .map(|j| {
            let literal = &n1 * c(p.omegas[j])
                + c1.adjoint() * c2.adjoint() * c(p.alphas[j])
                + &c2 * &c1 * c(p.betas[j]);
            LocalTerm {
                first_mode: j + 1,
                width: 2,
                block: literal.transpose(),
            }
        })
        .collect();
    let single = FockBasis::new(1)?;
    terms.push(LocalTerm {
        first_mode: p.site_count(),
        width: 1,
        block: single.number_operator(1)? * c(p.omegas[p.site_count() - 1]),
    });
    Ok(terms)
}

/// Dense `h_j` matrices on the full chain.
pub fn dense_terms(p: &ChainParams) -> Result<Vec<OperatorMatrix>> {
    chain_terms(p)?
        .iter()
        .map(|t| t.embed(p.site_count()))
        .collect()
}

/// `H̃` assembled from the full-chain Jordan–Wigner operators.
pub fn build_chain(p: &ChainParams) -> Result<OperatorMatrix> {
    let l = p.site_count();
    let basis = FockBasis::new(l)?;
    let mut literal = OperatorMatrix::zeros(basis.dimension(), basis.dimension());
    for j in 1..=l {
        literal += basis.number_operator(j)? * c(p.omegas[j - 1]);
    }
    for j in 1..l {
        let (cj, ck) = (basis.annihilation(j)?, basis.annihilation(j + 1)?);
        literal += cj.adjoint() * ck.adjoint() * c(p.alphas[j - 1]);
        literal += &ck * &cj * c(p.betas[j - 1]);
    }
    Ok(literal.transpose())
}

fn relative_gap(a: &OperatorMatrix, b: &OperatorMatrix) -> f64 {
    (a - b).norm() / a.norm().max(1.0)
}

fn eigen_propagator(h: &OperatorMatrix, t: f64) -> Option<OperatorMatrix> {
    let sys = decompose(h).ok()?;
    if sys.defective {
        return None;
    }
    let n = h.nrows();
    if relative_gap(
        &sys.resolution_of_identity(),
        &OperatorMatrix::identity(n, n),
    ) > PROPAGATOR_TOL
    {
        return None;
    }
    let at = |time: f64| {
        let mut u = OperatorMatrix::zeros(n, n);
        for i in 0..n {
            let phase =
                (C64::new(0.0, -time) * sys.eigenvalues[i]).exp() / sys.overlap_matrix[(i, i)];
            u += &sys.right_vectors[i] * &sys.left_vectors[i] * phase;
        }
        u
    };
    let u = at(t);
    let half = at(t / 2.0);
    (relative_gap(&u, &(&half * &half)) <= PROPAGATOR_TOL).then_some(u)
}

fn pade_propagator(h: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    let u = matrix_exp(&(h * C64::new(0.0, -t)))?;
    let half = matrix_exp(&(h * C64::new(0.0, -t / 2.0)))?;
    if relative_gap(&u, &(&half * &half)) > PROPAGATOR_TOL {
        return Err(Error::Numeric(format!(
            "propagator at t = {t} failed the half-step check"
        )));
    }
    Ok(u)
}

/// `U(t) = exp(-i H t)`, through the bi-orthogonal eigenbasis when `H` is
/// diagonalizable and by scaling and squaring otherwise.
pub fn exact_propagator(h: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    ensure_square(h, "Hamiltonian")?;
    ensure_finite(h, "Hamiltonian")?;
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "time must be finite, got {t}"
        )));
    }
    let n = h.nrows();
    if t == 0.0 {
        return Ok(OperatorMatrix::identity(n, n));
    }
    match eigen_propagator(h, t) {
        Some(u) => Ok(u),
        None => pade_propagator(h, t),
    }
}

fn check_steps(steps: u64) -> Result<()> {
    if steps == 0 {
        return Err(Error::InvalidParameter(
            "step count must be at least 1".into(),
        ));
    }
    Ok(())
}

/// `(∏_j exp(-i h_j t/N))^N` for dense terms, with `h_1` applied first.
pub fn trotter_propagator(terms: &[OperatorMatrix], t: f64, steps: u64) -> Result<OperatorMatrix> {
    check_steps(steps)?;
    let first = terms
        .first()
        .ok_or_else(|| Error::Shape("empty term list".into()))?;
    ensure_square(first, "term")?;
    let n = first.nrows();
    let scale = C64::new(0.0, -t / steps as f64);
    let mut step = OperatorMatrix::identity(n, n);
    for (j, h) in terms.iter().enumerate() {
        if h.shape() != (n, n) {
            return Err(Error::Shape(format!(
                "term {j} is {}x{}, expected {n}x{n}",
                h.nrows(),
                h.ncols()
            )));
        }
        step = matrix_exp(&(h * scale))? * step;
    }
    Ok(matrix_power(&step, steps))
}

/// As [`trotter_propagator`], exponentiating each local block before
/// embedding it.
pub fn trotter_propagator_local(
    terms: &[LocalTerm],
    mode_count: usize,
    t: f64,
    steps: u64,
) -> Result<OperatorMatrix> {
    check_steps(steps)?;
    let dim = FockBasis::new(mode_count)?.dimension();
    let scale = C64::new(0.0, -t / steps as f64);
    let mut step = OperatorMatrix::identity(dim, dim);
    for term in terms {
        step = term.embedded_exp(scale, mode_count)? * step;
    }
    Ok(matrix_power(&step, steps))
}

#[derive(Debug, Clone)]
pub struct PropagatorPair {
    pub exact: OperatorMatrix,
    pub trotterized: OperatorMatrix,
    pub steps: u64,
    pub time: f64,
    /// `‖exact - trotterized‖₂`
    pub error_norm: f64,
}

pub fn propagator_pair(p: &ChainParams, t: f64, steps: u64) -> Result<PropagatorPair> {
    let exact = exact_propagator(&build_chain(p)?, t)?;
    pair_with(exact, &chain_terms(p)?, p.site_count(), t, steps)
}

fn pair_with(
    exact: OperatorMatrix,
    terms: &[LocalTerm],
    sites: usize,
    t: f64,
    steps: u64,
) -> Result<PropagatorPair> {
    let trotterized = trotter_propagator_local(terms, sites, t, steps)?;
    let error_norm = spectral_norm(&(&exact - &trotterized))?;
    Ok(PropagatorPair {
        exact,
        trotterized,
        steps,
        time: t,
        error_norm,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrotterScan {
    /// `(N, ‖U - U_N‖₂)` in input order.
    pub points: Vec<(u64, f64)>,
    /// Least-squares slope of `ln error` against `ln N`.
    pub slope: Option<f64>,
}

/// Trotter error for every step count in `steps`, in input order.
pub fn trotter_error_scan(p: &ChainParams, t: f64, steps: &[u64]) -> Result<TrotterScan> {
    let exact = exact_propagator(&build_chain(p)?, t)?;
    let terms = chain_terms(p)?;
    let points = steps
        .par_iter()
        .map(|&n| {
            pair_with(exact.clone(), &terms, p.site_count(), t, n).map(|pair| (n, pair.error_norm))
        })
        .collect::<Result<Vec<_>>>()?;
    let slope = fitted_slope(&points);
    Ok(TrotterScan { points, slope })
}

/// Least-squares slope of `ln error` against `ln N` over points above the
/// round-off floor; `None` with fewer than two distinct such `N`.
pub fn fitted_slope(points: &[(u64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(_, e)| e > ROUNDOFF_FLOOR && e.is_finite())
        .map(|&(n, e)| ((n as f64).ln(), e.ln()))
        .collect();
    let count = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / count;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (logs.len() >= 2 && sxx > 0.0).then(|| sxy / sxx)
}

/// `1, 2, 4, …` up to and including `max` when it is a power of two.
pub fn doubling_ladder(min: u64, max: u64) -> Vec<u64> {
    std::iter::successors(Some(min.max(1)), |&n| n.checked_mul(2))
        .take_while(|&n| n <= max)
        .collect()
}
