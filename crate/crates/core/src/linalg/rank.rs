use ndarray::{s, Array1, Array2};
use ndarray_linalg::SVD;

use crate::error::Result;
use crate::matrix::{adjoint, CMat, ZERO};
use crate::tol::ToleranceConfig;

/// Singular values of `m`, descending. Empty input yields an empty vector.
pub fn singular_values(m: &CMat) -> Result<Array1<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Array1::zeros(0));
    }
    let (_, s, _) = m.svd(false, false)?;
    Ok(s)
}

fn rank_from_singular_values(s: &Array1<f64>, dims: (usize, usize), cfg: &ToleranceConfig) -> usize {
    let smax = s.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    let cutoff = cfg.rank_rel_tol * dims.0.max(dims.1) as f64 * smax;
    s.iter().filter(|&&x| x > cutoff).count()
}

/// Number of singular values above `rank_rel_tol * max(rows, cols) * sigma_max`.
/// The zero matrix has rank 0.
pub fn numerical_rank(m: &CMat, cfg: &ToleranceConfig) -> Result<usize> {
    let s = singular_values(m)?;
    Ok(rank_from_singular_values(&s, m.dim(), cfg))
}

/// Orthonormal basis (under the conjugate inner product) of the numerical
/// kernel of `m`, as the columns of a `cols x (cols - rank)` matrix.
///
/// The basis comes from the trailing right singular vectors, so
/// `||m . basis||` is at the rank-cutoff scale.
pub fn nullspace_basis(m: &CMat, cfg: &ToleranceConfig) -> Result<CMat> {
    let (rows, cols) = m.dim();
    if rows == 0 || cols == 0 {
        // Empty map: everything is in the kernel.
        return Ok(Array2::eye(cols));
    }
    let (_, s, vh) = m.svd(false, true)?;
    let vh = vh.expect("svd requested v^H");
    let rank = rank_from_singular_values(&s, m.dim(), cfg);
    // Rows rank..cols of V^H span the kernel's conjugate; V's columns do.
    let v = adjoint(&vh);
    if rank == cols {
        return Ok(Array2::from_elem((cols, 0), ZERO));
    }
    Ok(v.slice(s![.., rank..]).to_owned())
}
