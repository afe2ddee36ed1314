//! Dense complex matrices and the small predicates the pipeline relies on.
//!
//! Matrices are plain `ndarray` arrays of `Complex64`; the helpers here fix
//! the conventions: `transpose` is the plain transpose (no conjugation),
//! "symmetric" means `M == M^T` entrywise, and unqualified norms in the
//! contracts are the max-modulus entry norm.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, the universal carrier for the whole pipeline.
pub type CMat = Array2<Complex64>;
/// Dense complex vector.
pub type CVec = Array1<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Max-modulus entry norm; 0 for empty matrices.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Plain transpose, no conjugation.
pub fn transpose(m: &CMat) -> CMat {
    m.t().to_owned()
}

/// Conjugate transpose.
pub fn adjoint(m: &CMat) -> CMat {
    m.t().mapv(|z| z.conj())
}

pub fn conj(m: &CMat) -> CMat {
    m.mapv(|z| z.conj())
}

pub fn identity(n: usize) -> CMat {
    Array2::eye(n)
}

/// Max entrywise asymmetry `|M - M^T|`.
pub fn asymmetry(m: &CMat) -> f64 {
    let (r, c) = m.dim();
    if r != c {
        return f64::INFINITY;
    }
    let mut worst = 0.0f64;
    for i in 0..r {
        for j in (i + 1)..c {
            worst = worst.max((m[[i, j]] - m[[j, i]]).norm());
        }
    }
    worst
}

/// `M == M^T` entrywise within `tol * max(1, ||M||)`.
pub fn is_symmetric(m: &CMat, tol: f64) -> bool {
    m.nrows() == m.ncols() && asymmetry(m) <= tol * max_abs(m).max(1.0)
}

/// Replace `M` by `(M + M^T) / 2`, removing rounding-level asymmetry.
pub fn symmetrize(m: &CMat) -> CMat {
    (m + &transpose(m)).mapv(|z| z * 0.5)
}

/// Ensure a square symmetric matrix, erroring otherwise.
pub fn require_symmetric(m: &CMat, tol: f64) -> Result<()> {
    let (r, c) = m.dim();
    if r != c {
        return Err(Error::NotSquare { rows: r, cols: c });
    }
    let allowed = tol * max_abs(m).max(1.0);
    let asym = asymmetry(m);
    if asym > allowed {
        return Err(Error::NotSymmetric { max_asym: asym, allowed });
    }
    Ok(())
}

/// `||conj(U)^T U - I||_max <= tol`.
pub fn is_unitary(u: &CMat, tol: f64) -> bool {
    if u.nrows() != u.ncols() {
        return false;
    }
    let g = adjoint(u).dot(u) - identity(u.nrows());
    max_abs(&g) <= tol
}

/// `||U^T U - I||_max <= tol` (plain transpose).
pub fn is_orthogonal(u: &CMat, tol: f64) -> bool {
    if u.nrows() != u.ncols() {
        return false;
    }
    let g = transpose(u).dot(u) - identity(u.nrows());
    max_abs(&g) <= tol
}

/// Congruence `P^T M P`.
pub fn congruate(m: &CMat, p: &CMat) -> CMat {
    transpose(p).dot(m).dot(p)
}

/// Block-diagonal direct sum `A ⊕ B`.
pub fn direct_sum(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::from_elem((ar + br, ac + bc), ZERO);
    out.slice_mut(ndarray::s![..ar, ..ac]).assign(a);
    out.slice_mut(ndarray::s![ar.., ac..]).assign(b);
    out
}

/// Direct sum of a list of square blocks.
pub fn block_diag(blocks: &[CMat]) -> CMat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = Array2::from_elem((n, n), ZERO);
    let mut off = 0;
    for b in blocks {
        let k = b.nrows();
        out.slice_mut(ndarray::s![off..off + k, off..off + k]).assign(b);
        off += k;
    }
    out
}

/// Horizontal concatenation `[A | B]`; `A` may have zero columns.
pub fn hcat(a: &CMat, b: &CMat) -> Result<CMat> {
    if a.ncols() > 0 && b.ncols() > 0 && a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            context: format!("hcat of {}x{} and {}x{}", a.nrows(), a.ncols(), b.nrows(), b.ncols()),
        });
    }
    let rows = a.nrows().max(b.nrows());
    let mut out = Array2::from_elem((rows, a.ncols() + b.ncols()), ZERO);
    if a.ncols() > 0 {
        out.slice_mut(ndarray::s![.., ..a.ncols()]).assign(a);
    }
    if b.ncols() > 0 {
        out.slice_mut(ndarray::s![.., a.ncols()..]).assign(b);
    }
    Ok(out)
}

/// Vertical stack of equally wide matrices.
pub fn vstack(mats: &[&CMat]) -> Result<CMat> {
    let cols = mats.first().map(|m| m.ncols()).unwrap_or(0);
    if mats.iter().any(|m| m.ncols() != cols) {
        return Err(Error::DimensionMismatch { context: "vstack of unequal widths".into() });
    }
    let rows: usize = mats.iter().map(|m| m.nrows()).sum();
    let mut out = Array2::from_elem((rows, cols), ZERO);
    let mut off = 0;
    for m in mats {
        out.slice_mut(ndarray::s![off..off + m.nrows(), ..]).assign(m);
        off += m.nrows();
    }
    Ok(out)
}

/// Build a matrix from row-major real/imaginary pairs. Test and I/O helper.
pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> CMat {
    let r = rows.len();
    let c = rows.first().map(|v| v.len()).unwrap_or(0);
    let mut out = Array2::from_elem((r, c), ZERO);
    for (i, row) in rows.iter().enumerate() {
        for (j, &(re, im)) in row.iter().enumerate() {
            out[[i, j]] = Complex64::new(re, im);
        }
    }
    out
}

/// Real matrix shortcut for tests.
pub fn from_real_rows(rows: &[Vec<f64>]) -> CMat {
    let r = rows.len();
    let c = rows.first().map(|v| v.len()).unwrap_or(0);
    let mut out = Array2::from_elem((r, c), ZERO);
    for (i, row) in rows.iter().enumerate() {
        for (j, &re) in row.iter().enumerate() {
            out[[i, j]] = Complex64::new(re, 0.0);
        }
    }
    out
}
