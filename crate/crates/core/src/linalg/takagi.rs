use ndarray::{s, Array1, Array2};
use ndarray_linalg::{Eigh, SVD, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{block_diag, conj, max_abs, require_symmetric, symmetrize, transpose, CMat};
use crate::tol::ToleranceConfig;

/// Takagi factorization of a complex symmetric matrix: a unitary `V` and a
/// real nonnegative diagonal `D` (returned as its diagonal vector, sorted
/// descending) with `V^T C V = D`. The diagonal entries are the singular
/// values of `C`.
///
/// Construction: from the SVD `C = U S V^H`, the unitary `W = V^H conj(U)`
/// is block diagonal over groups of equal singular values with symmetric
/// unitary blocks. Each block `W_g` splits as `X + iY` with `X`, `Y`
/// commuting real symmetric, so a real orthogonal `E` diagonalizes both and
/// `S_g = E diag(exp(i theta/2)) E^T` is a unitary square root with
/// `S_g S_g^T = W_g`. Then `U S_blockdiag` is a Takagi factor of `C`.
pub fn takagi(c: &CMat, cfg: &ToleranceConfig) -> Result<(CMat, Array1<f64>)> {
    require_symmetric(c, cfg.residual_tol)?;
    let n = c.nrows();
    if n == 0 {
        return Ok((CMat::zeros((0, 0)), Array1::zeros(0)));
    }
    let cs = symmetrize(c);
    let scale = max_abs(&cs);
    if scale == 0.0 {
        return Ok((Array2::eye(n), Array1::zeros(n)));
    }

    let (u, sv, vh) = cs.svd(true, true)?;
    let u = u.expect("svd requested u");
    let vh = vh.expect("svd requested v^H");
    let w = vh.dot(&conj(&u));

    let group_tol = cfg.eig_cluster_tol * sv[0].max(1.0);
    let mut attempt_tol = group_tol;
    for attempt in 0..2 {
        let v_out = assemble(&u, &sv, &w, attempt_tol, cfg)?;
        let residual = takagi_residual(&cs, &v_out, &sv);
        if residual <= cfg.residual_tol * scale {
            return Ok((v_out, sv));
        }
        if attempt == 0 {
            // Near-degenerate singular values mis-grouped at the fine
            // tolerance; regroup coarsely and retry.
            attempt_tol = group_tol * 1e3;
        } else {
            return Err(Error::TakagiResidual {
                residual,
                allowed: cfg.residual_tol * scale,
            });
        }
    }
    unreachable!()
}

fn takagi_residual(c: &CMat, v: &CMat, d: &Array1<f64>) -> f64 {
    let mut m = transpose(v).dot(c).dot(v);
    for (i, &x) in d.iter().enumerate() {
        m[[i, i]] -= Complex64::new(x, 0.0);
    }
    max_abs(&m)
}

fn assemble(
    u: &CMat,
    sv: &Array1<f64>,
    w: &CMat,
    group_tol: f64,
    cfg: &ToleranceConfig,
) -> Result<CMat> {
    let n = sv.len();
    let zero_cutoff = cfg.rank_rel_tol * n as f64 * sv[0];

    // Contiguous groups of (numerically) equal singular values; everything
    // below the rank cutoff forms the trailing zero group.
    let mut blocks: Vec<CMat> = Vec::new();
    let mut start = 0;
    while start < n {
        if sv[start] <= zero_cutoff {
            blocks.push(Array2::eye(n - start));
            break;
        }
        let mut end = start + 1;
        while end < n && sv[end] > zero_cutoff && sv[end - 1] - sv[end] <= group_tol {
            end += 1;
        }
        let wg = symmetrize(&w.slice(s![start..end, start..end]).to_owned());
        blocks.push(sqrt_symmetric_unitary(&wg)?);
        start = end;
    }

    let ut = u.dot(&block_diag(&blocks));
    Ok(conj(&ut))
}

/// Unitary square root `S` of a symmetric unitary `W` with `S S^T = W`.
fn sqrt_symmetric_unitary(w: &CMat) -> Result<CMat> {
    let k = w.nrows();
    let x = {
        let mut x = w.mapv(|z| z.re);
        x = (&x + &x.t()).mapv(|v| v * 0.5);
        x
    };
    let y = {
        let mut y = w.mapv(|z| z.im);
        y = (&y + &y.t()).mapv(|v| v * 0.5);
        y
    };

    // Joint real-orthogonal eigenbasis of the commuting pair (X, Y):
    // diagonalize X, then diagonalize Y restricted to each eigenvalue
    // cluster of X.
    let (alpha, mut e) = x.eigh(UPLO::Lower)?;
    let cluster_tol = 1e-7;
    let mut start = 0;
    while start < k {
        let mut end = start + 1;
        while end < k && alpha[end] - alpha[end - 1] <= cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            let sub = e.slice(s![.., start..end]).to_owned();
            let y_sub = sub.t().dot(&y).dot(&sub);
            let y_sub = (&y_sub + &y_sub.t()).mapv(|v| v * 0.5);
            let (_, rot) = y_sub.eigh(UPLO::Lower)?;
            let rotated = sub.dot(&rot);
            e.slice_mut(s![.., start..end]).assign(&rotated);
        }
        start = end;
    }

    let mut s_mat = Array2::<Complex64>::zeros((k, k));
    let ec = e.mapv(|v| Complex64::new(v, 0.0));
    let mut half_phases = Array1::<Complex64>::zeros(k);
    for i in 0..k {
        let col = e.column(i);
        let a: f64 = col.dot(&x.dot(&col));
        let b: f64 = col.dot(&y.dot(&col));
        let theta = b.atan2(a);
        half_phases[i] = Complex64::from_polar(1.0, theta / 2.0);
    }
    for i in 0..k {
        for j in 0..k {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..k {
                acc += ec[[i, l]] * half_phases[l] * ec[[j, l]];
            }
            s_mat[[i, j]] = acc;
        }
    }
    Ok(s_mat)
}
