use ndarray::Array1;
use ndarray_linalg::Eig;
use num_complex::Complex64;

use super::rank::singular_values;
use crate::error::{Error, Result};
use crate::matrix::{identity, max_abs, CMat, CVec};
use crate::tol::ToleranceConfig;

/// Floor on the relative merge distance used when clustering eigenvalues
/// for the defectiveness test. A Jordan block of size 2 perturbed at the
/// machine-epsilon level splits its eigenvalue by O(sqrt(eps)), so the
/// defect test must merge at a coarser scale than eig_cluster_tol alone.
const DEFECT_MERGE_FLOOR: f64 = 1e-6;

/// Eigendecomposition of a general square complex matrix.
#[derive(Debug, Clone)]
pub struct Eigen {
    /// All `n` eigenvalues, with multiplicity, in LAPACK order.
    pub values: CVec,
    /// Column `i` is a unit eigenvector for `values[i]`.
    pub vectors: CMat,
    /// True iff some eigenvalue cluster has geometric multiplicity below
    /// its algebraic multiplicity.
    pub defective: bool,
}

/// A cluster of numerically coincident eigenvalues.
#[derive(Debug, Clone)]
pub struct SpectralCluster {
    pub center: Complex64,
    /// Indices into the eigenvalue array.
    pub members: Vec<usize>,
    /// Max distance of a member from the center.
    pub radius: f64,
}

/// Cluster eigenvalues: sort by (Re, Im), merge neighbours closer than
/// `tol_abs`, and close transitively along the sorted chain.
pub fn spectral_clusters(values: &CVec, tol_abs: f64) -> Vec<SpectralCluster> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (values[a], values[b]);
        x.re.partial_cmp(&y.re)
            .unwrap()
            .then(x.im.partial_cmp(&y.im).unwrap())
    });

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &idx in &order {
        let merge = clusters
            .last()
            .map(|c| (values[*c.last().unwrap()] - values[idx]).norm() <= tol_abs)
            .unwrap_or(false);
        if merge {
            clusters.last_mut().unwrap().push(idx);
        } else {
            clusters.push(vec![idx]);
        }
    }

    clusters
        .into_iter()
        .map(|members| {
            let sum: Complex64 = members.iter().map(|&i| values[i]).sum();
            let center = sum / members.len() as f64;
            let radius = members
                .iter()
                .map(|&i| (values[i] - center).norm())
                .fold(0.0, f64::max);
            SpectralCluster { center, members, radius }
        })
        .collect()
}

/// Defectiveness test on an already computed spectrum.
///
/// Per cluster of algebraic multiplicity `k`, the geometric multiplicity is
/// the number of singular values of `M - center*I` below a threshold that
/// tracks the cluster radius: a semisimple cluster of nearby eigenvalues
/// collapses `k` singular values linearly with the radius, while a Jordan
/// block collapses them quadratically or faster, so the radius-aware count
/// separates the two.
pub(crate) fn is_defective(m: &CMat, values: &CVec, cfg: &ToleranceConfig) -> Result<bool> {
    let n = m.nrows();
    if n <= 1 {
        return Ok(false);
    }
    let scale = max_abs(m).max(1.0);
    let merge = cfg.eig_cluster_tol.max(DEFECT_MERGE_FLOOR) * scale;
    for cluster in spectral_clusters(values, merge) {
        let k = cluster.members.len();
        let shifted = m - &identity(n).mapv(|z| z * cluster.center);
        let sv = singular_values(&shifted)?;
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        // Floor the cutoff at the rank tolerance relative to the matrix
        // scale: for a near-multiple of the identity the eigenvalue spread
        // can round below the backward error of the shifted matrix, and
        // Jordan structure below this resolution is not observable anyway.
        let cutoff = (4.0 * cluster.radius)
            .max(cfg.rank_rel_tol * n as f64 * smax)
            .max(cfg.rank_rel_tol * n as f64 * scale);
        let nullity = sv.iter().filter(|&&x| x <= cutoff).count();
        if nullity < k {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Eigenvalues and unit right eigenvectors of a square complex matrix,
/// plus the defectiveness flag.
pub fn eig(m: &CMat, cfg: &ToleranceConfig) -> Result<Eigen> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if rows == 0 {
        return Ok(Eigen {
            values: Array1::zeros(0),
            vectors: CMat::zeros((0, 0)),
            defective: false,
        });
    }
    let (values, vectors) = m.eig()?;
    let defective = is_defective(m, &values, cfg)?;
    Ok(Eigen { values, vectors, defective })
}
