//! Bi-orthogonal eigendecomposition of small dense non-Hermitian matrices
//! and exceptional-point scanning over two-parameter families.
//!
//! Right eigenvectors come from the complex Schur form of `M`, left
//! eigenvectors from the Schur form of `M^H` (conjugated), and the two sets
//! are paired greedily by the magnitude of their overlap. Eigenvalues that
//! agree to within `1e-6 ‖M‖` are resolved together through the null space
//! of `M - λ̄ I`: if that null space is smaller than the cluster, the block is
//! defective, the cluster's vectors coalesce and the system is flagged.

use nalgebra::{DMatrix, DVector, RowDVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, c, ensure_finite, ensure_square, OperatorMatrix, C64};

pub const MAX_DIMENSION: usize = 4096;

/// Paired `|⟨L_i|R_i⟩|` (unit vectors) below this marks the system defective.
pub const DEFECTIVE_TOL: f64 = 1e-10;

/// Relative tolerance for rank decisions, `tol = RANK_TOL * ‖M‖`.
pub const RANK_TOL: f64 = 1e-8;

const CLUSTER_TOL: f64 = 1e-6;
const BISECTION_STEPS: usize = 60;

#[derive(Debug, Clone)]
pub struct BiorthoSystem {
    pub eigenvalues: Vec<C64>,
    /// Unit-norm right eigenvectors `|R_i⟩`.
    pub right_vectors: Vec<DVector<C64>>,
    /// Unit-norm left eigenvectors `⟨L_i|`, phased so `⟨L_i|R_i⟩ >= 0`.
    pub left_vectors: Vec<RowDVector<C64>>,
    /// `overlap_matrix[(i, j)] = ⟨L_i|R_j⟩`
    pub overlap_matrix: DMatrix<C64>,
    pub defective: bool,
}

impl BiorthoSystem {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn self_orthogonality(&self, i: usize) -> Result<f64> {
        self_orthogonality(self, i)
    }

    /// `Σ_i |R_i⟩⟨L_i| / ⟨L_i|R_i⟩`; equals the identity when the system is
    /// complete.
    pub fn resolution_of_identity(&self) -> OperatorMatrix {
        let n = self.len();
        let mut acc = OperatorMatrix::zeros(n, n);
        for i in 0..n {
            let overlap = self.overlap_matrix[(i, i)];
            acc += &self.right_vectors[i] * &self.left_vectors[i] / overlap;
        }
        acc
    }
}

/// Normalised self-overlap `|⟨L_i|R_i⟩| / (‖L_i‖ ‖R_i‖)`, in `[0, 1]`.
pub fn self_orthogonality(sys: &BiorthoSystem, i: usize) -> Result<f64> {
    if i >= sys.len() {
        return Err(Error::Index {
            what: "eigenstate",
            index: i,
            len: sys.len(),
        });
    }
    let l = &sys.left_vectors[i];
    let r = &sys.right_vectors[i];
    let denom = l.norm() * r.norm();
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(((l * r)[(0, 0)].norm() / denom).min(1.0))
}

pub fn decompose(m: &OperatorMatrix) -> Result<BiorthoSystem> {
    ensure_square(m, "matrix")?;
    if m.nrows() > MAX_DIMENSION {
        return Err(Error::Size {
            what: "matrix dimension",
            value: m.nrows(),
            min: 0,
            max: MAX_DIMENSION,
        });
    }
    ensure_finite(m, "matrix")?;
    let n = m.nrows();
    if n == 0 {
        return Ok(BiorthoSystem {
            eigenvalues: vec![],
            right_vectors: vec![],
            left_vectors: vec![],
            overlap_matrix: DMatrix::zeros(0, 0),
            defective: false,
        });
    }
    let scale = m.norm().max(f64::MIN_POSITIVE);

    let (mut eigenvalues, right) = linalg::right_eigenpairs(m)?;
    let (_, left_cols) = linalg::right_eigenpairs(&m.adjoint())?;
    let mut rights: Vec<DVector<C64>> = right.column_iter().map(|col| col.into_owned()).collect();
    let left_candidates: Vec<RowDVector<C64>> =
        left_cols.column_iter().map(|col| col.adjoint()).collect();

    let assignment = greedy_pairing(&left_candidates, &rights);
    let mut lefts: Vec<RowDVector<C64>> = assignment
        .iter()
        .map(|&k| left_candidates[k].clone())
        .collect();

    for cluster in clusters(&eigenvalues, CLUSTER_TOL * scale) {
        if cluster.len() > 1 {
            resolve_cluster(
                m,
                scale,
                &cluster,
                &mut eigenvalues,
                &mut rights,
                &mut lefts,
            )?;
        }
    }

    for (r, l) in rights.iter_mut().zip(lefts.iter_mut()) {
        fix_right_phase(r);
        let norm = l.norm();
        if norm > 0.0 {
            *l /= c(norm);
        }
        let overlap = (&*l * &*r)[(0, 0)];
        if overlap.norm() > 0.0 {
            *l *= overlap.conj() / overlap.norm();
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eigenvalues[a]
            .re
            .total_cmp(&eigenvalues[b].re)
            .then(eigenvalues[a].im.total_cmp(&eigenvalues[b].im))
            .then(a.cmp(&b))
    });
    let eigenvalues: Vec<C64> = order.iter().map(|&i| eigenvalues[i]).collect();
    let right_vectors: Vec<DVector<C64>> = order.iter().map(|&i| rights[i].clone()).collect();
    let left_vectors: Vec<RowDVector<C64>> = order.iter().map(|&i| lefts[i].clone()).collect();

    let rmat = DMatrix::from_columns(&right_vectors);
    let lmat = DMatrix::from_rows(&left_vectors);
    let overlap_matrix = lmat * rmat;
    let defective = (0..n).any(|i| overlap_matrix[(i, i)].norm() < DEFECTIVE_TOL);

    Ok(BiorthoSystem {
        eigenvalues,
        right_vectors,
        left_vectors,
        overlap_matrix,
        defective,
    })
}

/// Index of the left candidate assigned to each right vector, chosen by
/// descending normalised overlap; ties go to the lowest indices.
fn greedy_pairing(lefts: &[RowDVector<C64>], rights: &[DVector<C64>]) -> Vec<usize> {
    let n = rights.len();
    let mut entries = Vec::with_capacity(n * n);
    for (i, r) in rights.iter().enumerate() {
        for (k, l) in lefts.iter().enumerate() {
            let denom = (l.norm() * r.norm()).max(f64::MIN_POSITIVE);
            entries.push(((l * r)[(0, 0)].norm() / denom, i, k));
        }
    }
    entries.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut assigned = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    let mut remaining = n;
    for (_, i, k) in entries {
        if remaining == 0 {
            break;
        }
        if assigned[i] == usize::MAX && !taken[k] {
            assigned[i] = k;
            taken[k] = true;
            remaining -= 1;
        }
    }
    assigned
}

/// Connected components of the "within `tol`" relation on eigenvalues.
fn clusters(values: &[C64], tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(i);
    }
    groups
}

fn resolve_cluster(
    m: &OperatorMatrix,
    scale: f64,
    cluster: &[usize],
    eigenvalues: &mut [C64],
    rights: &mut [DVector<C64>],
    lefts: &mut [RowDVector<C64>],
) -> Result<()> {
    let n = m.nrows();
    let k = cluster.len();
    let mean = cluster.iter().map(|&i| eigenvalues[i]).sum::<C64>() / c(k as f64);
    let spread = cluster
        .iter()
        .map(|&i| (eigenvalues[i] - mean).norm())
        .fold(0.0, f64::max);
    let shifted = m - OperatorMatrix::identity(n, n) * mean;
    let svd = linalg::svd(&shifted)?;
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let tol = (RANK_TOL * scale).max(4.0 * spread);
    let null_dim = svd.singular_values.iter().filter(|&&s| s <= tol).count();

    // Singular values are sorted descending, so the null space is the tail.
    let right_null = |idx: usize| -> DVector<C64> { v_t.row(idx).adjoint() };
    let left_null = |idx: usize| -> RowDVector<C64> { u.column(idx).adjoint() };

    if null_dim >= k {
        let r_basis = DMatrix::from_columns(&(n - k..n).map(right_null).collect::<Vec<_>>());
        let l_basis = DMatrix::from_rows(&(n - k..n).map(left_null).collect::<Vec<_>>());
        let gram = &l_basis * &r_basis;
        let gram_svd = linalg::svd(&gram)?;
        let smallest = gram_svd
            .singular_values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if smallest > DEFECTIVE_TOL {
            if let Some(gram_inv) = gram.try_inverse() {
                let l_dual = gram_inv * l_basis;
                let reduced = &l_dual * m * &r_basis;
                let (mu, y) = linalg::right_eigenpairs(&reduced)?;
                if let Some(y_inv) = y.clone().try_inverse() {
                    let r_new = &r_basis * &y;
                    let l_new = y_inv * l_dual;
                    for (slot, &i) in cluster.iter().enumerate() {
                        eigenvalues[i] = mu[slot];
                        rights[i] = r_new.column(slot).into_owned();
                        lefts[i] = l_new.row(slot).into_owned();
                    }
                    return Ok(());
                }
            }
        }
    }

    // Defective: the available null vectors are shared across the cluster.
    let available = null_dim.clamp(1, k);
    for (slot, &i) in cluster.iter().enumerate() {
        let idx = n - 1 - (slot % available);
        eigenvalues[i] = mean;
        rights[i] = right_null(idx);
        lefts[i] = left_null(idx);
    }
    Ok(())
}

/// Unit norm, with the largest-magnitude component real and positive.
fn fix_right_phase(v: &mut DVector<C64>) {
    let norm = v.norm();
    if norm == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0_f64), |best, (i, z)| {
            if z.norm() > best.1 * (1.0 + 1e-12) {
                (i, z.norm())
            } else {
                best
            }
        })
        .0;
    let phase = v[pivot].conj() / v[pivot].norm();
    *v *= phase / norm;
}

/// One axis of a rectangular parameter grid, `points` evenly spaced values
/// from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        let axis = Self { min, max, points };
        axis.validate()?;
        Ok(axis)
    }

    fn validate(&self) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() || self.min > self.max {
            return Err(Error::Input(format!(
                "axis bounds must be finite with min <= max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.points < 2 {
            return Err(Error::Input(format!(
                "grid axis needs at least 2 points, got {}",
                self.points
            )));
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.points - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.value(i)).collect()
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.points - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamGrid {
    pub x: Axis,
    pub y: Axis,
}

impl ParamGrid {
    pub fn new(x: Axis, y: Axis) -> Self {
        Self { x, y }
    }

    pub fn cell_diagonal(&self) -> f64 {
        self.x.step().hypot(self.y.step())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExceptionalReport {
    /// `(x, y)` in the grid's own coordinates, e.g. `(α, β)` or `(z, Δ)`.
    pub location: (f64, f64),
    /// Indices into the eigenvalue list of [`decompose`] at `location`.
    pub coalesced_indices: (usize, usize),
    pub eigenvalue: C64,
    pub eigenvalue_gap: f64,
    pub self_overlap: f64,
    /// Algebraic minus geometric multiplicity of the coalesced pair.
    pub jordan_rank_defect: usize,
}

/// Scan a two-parameter matrix family for exceptional points.
///
/// Eigenvalues are computed at every node and carried to the other corners
/// of each cell by nearest-eigenvalue matching. A cell is refined for a
/// branch pair when the pair switches between real-dominated and
/// imaginary-dominated splitting across the corners (bisection along a
/// segment whose end points differ locates the switch), or when the pair is
/// already within `tol` at a corner. A point is reported when, at the refined
/// location, both the pair's eigenvalue gap and its normalised self-overlap
/// are below `tol` and the pair has a Jordan defect.
///
/// Results are ordered by cell index (row-major in `y`, then `x`), with
/// coincident points reported once.
pub fn scan_exceptional<F>(grid: &ParamGrid, builder: F, tol: f64) -> Result<Vec<ExceptionalReport>>
where
    F: Fn(f64, f64) -> OperatorMatrix + Sync,
{
    grid.x.validate()?;
    grid.y.validate()?;
    if tol.is_nan() || tol <= 0.0 || !tol.is_finite() {
        return Err(Error::Input(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let (nx, ny) = (grid.x.points, grid.y.points);
    let xs = grid.x.values();
    let ys = grid.y.values();

    let nodes: Vec<Vec<C64>> = (0..nx * ny)
        .into_par_iter()
        .map(|k| linalg::eigenvalues(&builder(xs[k % nx], ys[k / nx])))
        .collect::<Result<_>>()?;

    let per_cell: Vec<Vec<ExceptionalReport>> = (0..(nx - 1) * (ny - 1))
        .into_par_iter()
        .map(|cell| {
            let (i, j) = (cell % (nx - 1), cell / (nx - 1));
            let corners = [
                (xs[i], ys[j]),
                (xs[i + 1], ys[j]),
                (xs[i], ys[j + 1]),
                (xs[i + 1], ys[j + 1]),
            ];
            let eigs = [
                &nodes[j * nx + i],
                &nodes[j * nx + i + 1],
                &nodes[(j + 1) * nx + i],
                &nodes[(j + 1) * nx + i + 1],
            ];
            scan_cell(&builder, &corners, &eigs, tol)
        })
        .collect::<Result<_>>()?;

    let mut reports: Vec<ExceptionalReport> = Vec::new();
    for report in per_cell.into_iter().flatten() {
        let (x, y) = report.location;
        let dup = reports.iter().any(|r| {
            let (rx, ry) = r.location;
            let scale = 1.0 + x.abs().max(y.abs());
            (rx - x).abs() <= 1e-9 * scale && (ry - y).abs() <= 1e-9 * scale
        });
        if !dup {
            reports.push(report);
        }
    }
    Ok(reports)
}

fn imag_dominated(a: C64, b: C64) -> bool {
    let d = a - b;
    d.im.abs() > d.re.abs()
}

/// Reorder `values` to best match `reference` (greedy nearest neighbour).
fn align(reference: &[C64], values: &[C64]) -> Vec<C64> {
    let n = reference.len();
    let mut entries = Vec::with_capacity(n * n);
    for (i, r) in reference.iter().enumerate() {
        for (k, v) in values.iter().enumerate() {
            entries.push(((r - v).norm(), i, k));
        }
    }
    entries.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut out = vec![C64::new(f64::NAN, f64::NAN); n];
    let mut used = vec![false; values.len()];
    let mut filled = vec![false; n];
    for (_, i, k) in entries {
        if !filled[i] && !used[k] {
            out[i] = values[k];
            filled[i] = true;
            used[k] = true;
        }
    }
    out
}

/// Indices `(i, j)` of the pair in `values` closest to `(a, b)`.
fn nearest_pair(values: &[C64], a: C64, b: C64) -> Option<(usize, usize)> {
    let mut best: Option<(f64, usize, usize)> = None;
    for i in 0..values.len() {
        for j in 0..values.len() {
            if i == j {
                continue;
            }
            let cost = (values[i] - a).norm() + (values[j] - b).norm();
            if best.is_none_or(|(bc, _, _)| cost < bc) {
                best = Some((cost, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i.min(j), i.max(j)))
}

fn scan_cell<F>(
    builder: &F,
    corners: &[(f64, f64); 4],
    eigs: &[&Vec<C64>; 4],
    tol: f64,
) -> Result<Vec<ExceptionalReport>>
where
    F: Fn(f64, f64) -> OperatorMatrix + Sync,
{
    let n = eigs[0].len();
    let aligned: Vec<Vec<C64>> = eigs.iter().map(|e| align(eigs[0], e)).collect();
    // Diagonals first, then edges.
    const SEGMENTS: [(usize, usize); 6] = [(0, 3), (1, 2), (0, 1), (0, 2), (1, 3), (2, 3)];

    let mut reports = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let kinds: Vec<bool> = aligned.iter().map(|e| imag_dominated(e[a], e[b])).collect();
            let gaps: Vec<f64> = aligned.iter().map(|e| (e[a] - e[b]).norm()).collect();

            let candidate =
                if let Some(&(s, t)) = SEGMENTS.iter().find(|&&(s, t)| kinds[s] != kinds[t]) {
                    Some(bisect_switch(
                        builder,
                        corners[s],
                        corners[t],
                        (aligned[s][a], aligned[s][b]),
                        kinds[s],
                    )?)
                } else {
                    let (best, &gap) = gaps
                        .iter()
                        .enumerate()
                        .min_by(|x, y| x.1.total_cmp(y.1))
                        .expect("four corners");
                    (gap <= tol).then_some((corners[best], (aligned[best][a], aligned[best][b])))
                };

            if let Some((point, tracked)) = candidate {
                if let Some(report) = evaluate_candidate(builder, point, tracked, tol)? {
                    reports.push(report);
                }
            }
        }
    }
    Ok(reports)
}

type Tracked = ((f64, f64), (C64, C64));

fn bisect_switch<F>(
    builder: &F,
    start: (f64, f64),
    end: (f64, f64),
    mut tracked: (C64, C64),
    start_kind: bool,
) -> Result<Tracked>
where
    F: Fn(f64, f64) -> OperatorMatrix + Sync,
{
    let at = |s: f64| {
        (
            start.0 + s * (end.0 - start.0),
            start.1 + s * (end.1 - start.1),
        )
    };
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let p = at(mid);
        let values = linalg::eigenvalues(&builder(p.0, p.1))?;
        let Some((i, j)) = nearest_pair(&values, tracked.0, tracked.1) else {
            break;
        };
        // Keep branch identity: (i, j) are sorted, so re-match to the tracked order.
        let (va, vb) = if (values[i] - tracked.0).norm() + (values[j] - tracked.1).norm()
            <= (values[j] - tracked.0).norm() + (values[i] - tracked.1).norm()
        {
            (values[i], values[j])
        } else {
            (values[j], values[i])
        };
        tracked = (va, vb);
        if imag_dominated(va, vb) == start_kind {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((at(0.5 * (lo + hi)), tracked))
}

fn evaluate_candidate<F>(
    builder: &F,
    point: (f64, f64),
    tracked: (C64, C64),
    tol: f64,
) -> Result<Option<ExceptionalReport>>
where
    F: Fn(f64, f64) -> OperatorMatrix + Sync,
{
    let m = builder(point.0, point.1);
    let sys = decompose(&m)?;
    let Some((i, j)) = nearest_pair(&sys.eigenvalues, tracked.0, tracked.1) else {
        return Ok(None);
    };
    let gap = (sys.eigenvalues[i] - sys.eigenvalues[j]).norm();
    let overlap = self_orthogonality(&sys, i)?.max(self_orthogonality(&sys, j)?);
    if !(gap < tol && overlap < tol) {
        return Ok(None);
    }
    let eigenvalue = (sys.eigenvalues[i] + sys.eigenvalues[j]) * 0.5;
    let defect = jordan_defect(&m, eigenvalue, 2)?;
    if defect == 0 {
        return Ok(None);
    }
    Ok(Some(ExceptionalReport {
        location: point,
        coalesced_indices: (i, j),
        eigenvalue,
        eigenvalue_gap: gap,
        self_overlap: overlap,
        jordan_rank_defect: defect,
    }))
}

/// `multiplicity - dim ker(M - λI)`, with the kernel measured at
/// `RANK_TOL * ‖M‖₂` and at least one (λ is taken to be an eigenvalue).
pub fn jordan_defect(m: &OperatorMatrix, eigenvalue: C64, multiplicity: usize) -> Result<usize> {
    let n = m.nrows();
    let norm = linalg::spectral_norm(m)?.max(f64::MIN_POSITIVE);
    let shifted = m - OperatorMatrix::identity(n, n) * eigenvalue;
    let rank = linalg::rank(&shifted, RANK_TOL * norm)?;
    let geometric = (n - rank).clamp(1, multiplicity);
    Ok(multiplicity - geometric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_hamiltonian, closed_form_spectrum, ModelParams};
    use approx::assert_relative_eq;

    fn model(omega: f64, alpha: f64, beta: f64) -> OperatorMatrix {
        build_hamiltonian(&ModelParams::new(omega, alpha, beta).unwrap())
    }

    #[test]
    fn rejects_non_square() {
        let m = OperatorMatrix::zeros(2, 3);
        assert!(matches!(decompose(&m), Err(Error::Shape(_))));
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = OperatorMatrix::zeros(2, 2);
        m[(0, 1)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(decompose(&m), Err(Error::Input(_))));
    }

    #[test]
    fn hermitian_model_left_is_adjoint_of_right() {
        let m = model(0.3, 0.7, 0.7);
        let sys = decompose(&m).unwrap();
        assert!(!sys.defective);
        for i in 0..4 {
            let o = sys.overlap_matrix[(i, i)];
            assert!(o.re > 0.0 && o.im.abs() < 1e-12);
            let diff = sys.left_vectors[i].adjoint() - &sys.right_vectors[i];
            assert!(diff.norm() < 1e-10, "state {i}: {}", diff.norm());
            assert_relative_eq!(self_orthogonality(&sys, i).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn matches_closed_form_eigenvalues() {
        let p = ModelParams::new(0.25, 1.0, 0.5).unwrap();
        let sys = decompose(&build_hamiltonian(&p)).unwrap();
        let cf = closed_form_spectrum(&p).unwrap();
        for e in cf.energies {
            let nearest = sys
                .eigenvalues
                .iter()
                .map(|x| (x - e).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-10, "{e}: {nearest}");
        }
    }

    #[test]
    fn exceptional_point_is_defective() {
        let m = model(0.25, 0.5, -0.5);
        let sys = decompose(&m).unwrap();
        assert!(sys.defective);
        let branch: Vec<usize> = (0..4)
            .filter(|&i| (sys.eigenvalues[i] - c(0.5)).norm() < 1e-6)
            .collect();
        assert_eq!(branch.len(), 2);
        for &i in &branch {
            assert!(self_orthogonality(&sys, i).unwrap() <= 1e-8);
        }
        for i in (0..4).filter(|i| !branch.contains(i)) {
            assert_relative_eq!(self_orthogonality(&sys, i).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn unit_vector_states_have_unit_self_overlap() {
        for &(a, b) in &[(0.3, -0.1), (2.0, 0.1), (1.0, -1.0)] {
            let sys = decompose(&model(0.2, a, b)).unwrap();
            for target in [0.2, 0.8] {
                let i = (0..4)
                    .find(|&i| (sys.eigenvalues[i] - c(target)).norm() < 1e-9)
                    .unwrap();
                assert_relative_eq!(self_orthogonality(&sys, i).unwrap(), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn self_orthogonality_index_error() {
        let sys = decompose(&model(0.2, 1.0, 2.0)).unwrap();
        assert!(matches!(
            self_orthogonality(&sys, 4),
            Err(Error::Index { .. })
        ));
    }

    #[test]
    fn degenerate_hermitian_cluster_is_biorthogonalised() {
        // omega = 1/2 makes E^III = E^IV.
        let m = model(0.5, 0.3, 0.3);
        let sys = decompose(&m).unwrap();
        assert!(!sys.defective);
        let id = OperatorMatrix::identity(4, 4);
        assert!((sys.resolution_of_identity() - id).norm() < 1e-10);
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| sys.overlap_matrix[(i, j)].norm())
            .fold(0.0, f64::max);
        assert!(off < 1e-10);
    }

    #[test]
    fn jordan_block_has_unit_defect() {
        let mut m = OperatorMatrix::zeros(3, 3);
        m[(0, 0)] = c(2.0);
        m[(0, 1)] = c(1.0);
        m[(1, 1)] = c(2.0);
        m[(2, 2)] = c(-1.0);
        assert_eq!(jordan_defect(&m, c(2.0), 2).unwrap(), 1);
        let sys = decompose(&m).unwrap();
        assert!(sys.defective);
        let d = OperatorMatrix::from_diagonal(&DVector::from_vec(vec![c(2.0), c(2.0), c(-1.0)]));
        assert_eq!(jordan_defect(&d, c(2.0), 2).unwrap(), 0);
    }

    #[test]
    fn axis_validation() {
        assert!(Axis::new(0.0, 1.0, 1).is_err());
        assert!(Axis::new(1.0, 0.0, 3).is_err());
        assert!(Axis::new(f64::NAN, 0.0, 3).is_err());
        let a = Axis::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(a.values(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn scan_rejects_bad_tolerance() {
        let g = ParamGrid::new(
            Axis::new(0.0, 1.0, 2).unwrap(),
            Axis::new(0.0, 1.0, 2).unwrap(),
        );
        assert!(matches!(
            scan_exceptional(&g, |a, b| model(0.25, a, b), 0.0),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn scan_rejects_empty_grid() {
        let g = ParamGrid::new(
            Axis {
                min: 0.0,
                max: 1.0,
                points: 0,
            },
            Axis {
                min: 0.0,
                max: 1.0,
                points: 3,
            },
        );
        assert!(matches!(
            scan_exceptional(&g, |a, b| model(0.25, a, b), 1e-6),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn scan_inside_positive_quadrant_is_empty() {
        let g = ParamGrid::new(
            Axis::new(0.1, 2.0, 25).unwrap(),
            Axis::new(0.1, 2.0, 25).unwrap(),
        );
        let reports = scan_exceptional(&g, |a, b| model(0.25, a, b), 1e-6).unwrap();
        assert!(reports.is_empty(), "{reports:?}");
    }

    #[test]
    fn scan_finds_hyperbola() {
        let g = ParamGrid::new(
            Axis::new(-1.0, 1.0, 41).unwrap(),
            Axis::new(-1.0, 1.0, 41).unwrap(),
        );
        let reports = scan_exceptional(&g, |a, b| model(0.25, a, b), 1e-6).unwrap();
        assert!(!reports.is_empty());
        for r in &reports {
            let (a, b) = r.location;
            assert!((4.0 * a * b + 1.0).abs() < 1e-6, "{r:?}");
            assert!(r.jordan_rank_defect >= 1);
            assert!((r.eigenvalue - c(0.5)).norm() < 1e-6);
        }
        assert!(reports.iter().any(|r| r.location.0 < 0.0));
        assert!(reports.iter().any(|r| r.location.0 > 0.0));
    }

    #[test]
    fn scan_in_z_delta_finds_tangent_point() {
        let g = ParamGrid::new(
            Axis::new(-1.0, 1.0, 21).unwrap(),
            Axis::new(0.25, 0.5, 2).unwrap(),
        );
        let reports = scan_exceptional(&g, |z, d| model(0.25, z - d, z + d), 1e-6).unwrap();
        assert_eq!(reports.len(), 1, "{reports:?}");
        let (z, d) = reports[0].location;
        assert!(z.abs() < 1e-6 && (d - 0.5).abs() < 1e-12);
    }
}
