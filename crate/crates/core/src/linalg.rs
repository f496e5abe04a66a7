//! Dense complex linear-algebra kernels shared by the spectral and
//! time-evolution modules.

use nalgebra::{DMatrix, DVector, Schur, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense square complex matrix over a Fock basis.
pub type OperatorMatrix = DMatrix<C64>;

const SCHUR_MAX_ITER: usize = 100_000;
const SVD_MAX_ITER: usize = 100_000;

pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Embed a real matrix in the complex field.
pub fn complexify(m: &DMatrix<f64>) -> OperatorMatrix {
    m.map(c)
}

pub fn ensure_square(m: &OperatorMatrix, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Shape(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

pub fn ensure_finite(m: &OperatorMatrix, what: &str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Input(format!("{what} has non-finite entries")))
    }
}

/// Complex Schur form `m = q t q^H` with `t` upper triangular.
pub fn schur(m: &OperatorMatrix) -> Result<(OperatorMatrix, OperatorMatrix)> {
    Schur::try_new(m.clone(), f64::EPSILON, SCHUR_MAX_ITER)
        .map(Schur::unpack)
        .ok_or_else(|| Error::Numeric("Schur iteration did not converge".into()))
}

/// Eigenvalues of a square complex matrix (Schur diagonal, unsorted).
pub fn eigenvalues(m: &OperatorMatrix) -> Result<Vec<C64>> {
    let (_, t) = schur(m)?;
    Ok(t.diagonal().iter().copied().collect())
}

/// Right eigenvectors of an upper-triangular matrix by back substitution,
/// one column per diagonal entry. Near-zero pivots are replaced by a small
/// multiple of the matrix scale, in the manner of LAPACK `ztrevc`.
pub fn triangular_eigenvectors(t: &OperatorMatrix) -> OperatorMatrix {
    let n = t.nrows();
    let scale = t
        .iter()
        .map(|z| z.norm())
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let small = scale * f64::EPSILON;
    let mut y = OperatorMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = c(1.0);
        for i in (0..k).rev() {
            let mut acc = C64::new(0.0, 0.0);
            for j in (i + 1)..=k {
                acc += t[(i, j)] * y[(j, k)];
            }
            let mut pivot = t[(i, i)] - lambda;
            if pivot.norm() < small {
                pivot = c(small);
            }
            y[(i, k)] = -acc / pivot;
        }
        // Back substitution can overflow for nearly defective blocks; rescale.
        let norm = y.column(k).norm();
        if norm > 0.0 && norm.is_finite() {
            let inv = 1.0 / norm;
            y.column_mut(k).scale_mut(inv);
        }
    }
    y
}

/// Eigenvalues and unit right eigenvectors through the complex Schur form.
pub fn right_eigenpairs(m: &OperatorMatrix) -> Result<(Vec<C64>, OperatorMatrix)> {
    let (q, t) = schur(m)?;
    let y = triangular_eigenvectors(&t);
    let mut v = q * y;
    for mut col in v.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col.scale_mut(1.0 / norm);
        }
    }
    Ok((t.diagonal().iter().copied().collect(), v))
}

/// Singular value decomposition with singular values sorted descending.
pub fn svd(m: &OperatorMatrix) -> Result<SVD<C64, nalgebra::Dyn, nalgebra::Dyn>> {
    SVD::try_new(m.clone(), true, true, f64::EPSILON, SVD_MAX_ITER)
        .ok_or_else(|| Error::Numeric("SVD iteration did not converge".into()))
}

/// Largest singular value.
pub fn spectral_norm(m: &OperatorMatrix) -> Result<f64> {
    if m.is_empty() {
        return Ok(0.0);
    }
    let svd = SVD::try_new(m.clone(), false, false, f64::EPSILON, SVD_MAX_ITER)
        .ok_or_else(|| Error::Numeric("SVD iteration did not converge".into()))?;
    Ok(svd.singular_values.iter().copied().fold(0.0, f64::max))
}

/// Numerical rank: singular values strictly above `tol`.
pub fn rank(m: &OperatorMatrix, tol: f64) -> Result<usize> {
    let svd = SVD::try_new(m.clone(), false, false, f64::EPSILON, SVD_MAX_ITER)
        .ok_or_else(|| Error::Numeric("SVD iteration did not converge".into()))?;
    Ok(svd.singular_values.iter().filter(|&&s| s > tol).count())
}

/// Integer power by repeated squaring.
pub fn matrix_power(m: &OperatorMatrix, mut exponent: u64) -> OperatorMatrix {
    let n = m.nrows();
    let mut result = OperatorMatrix::identity(n, n);
    let mut base = m.clone();
    while exponent > 0 {
        if exponent & 1 == 1 {
            result = &result * &base;
        }
        exponent >>= 1;
        if exponent > 0 {
            base = &base * &base;
        }
    }
    result
}

// Padé(13) numerator coefficients.
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371_920_351_148_152;

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant.
pub fn matrix_exp(a: &OperatorMatrix) -> Result<OperatorMatrix> {
    ensure_square(a, "matrix")?;
    let n = a.nrows();
    if n == 0 {
        return Ok(OperatorMatrix::zeros(0, 0));
    }
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    if !norm1.is_finite() {
        return Err(Error::Input(
            "matrix exponential of non-finite matrix".into(),
        ));
    }
    let squarings = if norm1 > THETA13 {
        (norm1 / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * c(2f64.powi(-squarings));

    let b = |k: usize| c(PADE13[k]);
    let id = OperatorMatrix::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9))
        + &a6 * b(7)
        + &a4 * b(5)
        + &a2 * b(3)
        + &id * b(1);
    let u = &scaled * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8))
        + &a6 * b(6)
        + &a4 * b(4)
        + &a2 * b(2)
        + &id * b(0);

    let mut result = (&v - &u)
        .lu()
        .solve(&(&v + &u))
        .ok_or_else(|| Error::Numeric("singular Padé denominator".into()))?;
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// Unit-norm copy of `v`, or `None` for the zero vector.
pub fn normalized(v: &DVector<C64>) -> Option<DVector<C64>> {
    let norm = v.norm();
    (norm > 0.0).then(|| v / c(norm))
}
