//! The reduced matrices `L_j = A~(lambda0)^{-1} A~_j` and the decision of
//! simultaneous diagonalizability by similarity (SDS).
//!
//! SDS holds iff the family pairwise commutes and every member is
//! diagonalizable. The joint eigenbasis is built by deterministic recursive
//! eigenspace refinement: a single random linear combination could mask a
//! defective member, and defectiveness must be attributed per matrix.

use ndarray::Array1;
use ndarray_linalg::{Factorize, Solve, QR};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eig, spectral_clusters};
use crate::matrix::{adjoint, hcat, identity, max_abs, CMat, CVec};
use crate::pencil::MaxRankWitness;
use crate::reduction::ReductionResult;
use crate::tol::ToleranceConfig;

/// The reduced `r x r` matrices together with the witness that produced them.
#[derive(Debug, Clone)]
pub struct ReducedFamily {
    l: Vec<CMat>,
    lambda0: Vec<Complex64>,
    r: usize,
}

/// Why a family is not SDS. Indices are 1-based, matching the family order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotSdsReason {
    NonCommuting { j: usize, k: usize },
    Defective { j: usize },
}

/// A maximal group of joint-eigenbasis columns sharing one eigenvalue tuple.
#[derive(Debug, Clone)]
pub struct JointBlock {
    /// Column offset of the block inside `P`.
    pub start: usize,
    pub size: usize,
    /// Per-matrix eigenvalue on this block.
    pub tuple: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct SdsSuccess {
    /// Invertible `r x r` matrix whose columns form the joint eigenbasis,
    /// blocks ordered lexicographically by tuple.
    pub p: CMat,
    pub blocks: Vec<JointBlock>,
}

#[derive(Debug)]
pub enum SdsOutcome {
    Sds(SdsSuccess),
    NotSds(NotSdsReason),
}

impl ReducedFamily {
    pub fn matrices(&self) -> &[CMat] {
        &self.l
    }

    pub fn lambda0(&self) -> &[Complex64] {
        &self.lambda0
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn m(&self) -> usize {
        self.l.len()
    }
}

impl SdsSuccess {
    /// Diagonal of `P^{-1} L_j P` for each `j`, read off the block tuples.
    pub fn diagonals(&self, m: usize) -> Vec<CVec> {
        let r: usize = self.blocks.iter().map(|b| b.size).sum();
        (0..m)
            .map(|j| {
                let mut d = Array1::zeros(r);
                for b in &self.blocks {
                    for i in b.start..b.start + b.size {
                        d[i] = b.tuple[j];
                    }
                }
                d
            })
            .collect()
    }
}

/// `L_j = A~(lambda0)^{-1} A~_j`, by LU solve against each right-hand side.
pub fn build_reduced_family(
    rr: &ReductionResult,
    w: &MaxRankWitness,
    cfg: &ToleranceConfig,
) -> Result<ReducedFamily> {
    let r = rr.r;
    let m = rr.reduced.len();
    if r == 0 {
        return Ok(ReducedFamily { l: vec![CMat::zeros((0, 0)); m], lambda0: w.lambda0.clone(), r });
    }
    let mut a_at_witness = CMat::zeros((r, r));
    for (c, a) in w.lambda0.iter().zip(&rr.reduced) {
        a_at_witness = a_at_witness + a.mapv(|z| z * *c);
    }
    let lu = a_at_witness
        .factorize()
        .map_err(|_| Error::WitnessInconsistent { found: 0, expected: r })?;

    let mut l = Vec::with_capacity(m);
    for a in &rr.reduced {
        let mut lj = CMat::zeros((r, r));
        for col in 0..r {
            let rhs = a.column(col).to_owned();
            let x = lu.solve(&rhs)?;
            lj.column_mut(col).assign(&x);
        }
        l.push(lj);
    }

    // sum_j (lambda0)_j L_j = I must hold by construction.
    let mut combo = CMat::zeros((r, r));
    for (c, lj) in w.lambda0.iter().zip(&l) {
        combo = combo + lj.mapv(|z| z * *c);
    }
    let residual = max_abs(&(combo - identity(r)));
    if residual > 1e-6_f64.max(cfg.residual_tol * 10.0) {
        return Err(Error::IdentityCombination { residual });
    }

    Ok(ReducedFamily { l, lambda0: w.lambda0.clone(), r })
}

/// First pair (1-based) whose commutator exceeds
/// `residual_tol * ||L_j|| * ||L_k||`, or `None` if the family commutes.
pub fn pairwise_commute(f: &ReducedFamily, cfg: &ToleranceConfig) -> Option<(usize, usize)> {
    let m = f.m();
    for j in 0..m {
        for k in (j + 1)..m {
            let (a, b) = (&f.l[j], &f.l[k]);
            let comm = a.dot(b) - b.dot(a);
            let scale = max_abs(a).max(1e-300) * max_abs(b).max(1e-300);
            if max_abs(&comm) > cfg.residual_tol * scale.max(1e-300) {
                return Some((j + 1, k + 1));
            }
        }
    }
    None
}

struct Subspace {
    /// Orthonormal columns spanning a common invariant subspace, `r x k`.
    basis: CMat,
    tuple: Vec<Complex64>,
}

/// Decide SDS and, on success, produce the joint eigenbasis with blocks
/// sorted lexicographically by eigenvalue tuple.
pub fn joint_diagonalize(f: &ReducedFamily, cfg: &ToleranceConfig) -> Result<SdsOutcome> {
    if let Some((j, k)) = pairwise_commute(f, cfg) {
        return Ok(SdsOutcome::NotSds(NotSdsReason::NonCommuting { j, k }));
    }
    let r = f.r();
    if r == 0 {
        return Ok(SdsOutcome::Sds(SdsSuccess { p: CMat::zeros((0, 0)), blocks: Vec::new() }));
    }

    let mut subspaces = vec![Subspace { basis: identity(r), tuple: Vec::new() }];
    for (j, lj) in f.l.iter().enumerate() {
        let fine_tol = cfg.eig_cluster_tol * max_abs(lj).max(1.0);
        let mut next: Vec<Subspace> = Vec::new();
        for sub in &subspaces {
            let k = sub.basis.ncols();
            if k == 1 {
                let b = sub.basis.column(0).to_owned();
                let val = adjoint(&sub.basis).dot(&lj.dot(&sub.basis))[[0, 0]];
                let mut tuple = sub.tuple.clone();
                tuple.push(val);
                next.push(Subspace { basis: b.insert_axis(ndarray::Axis(1)), tuple });
                continue;
            }
            // Restriction of L_j to the invariant subspace, in its
            // orthonormal basis.
            let restricted = adjoint(&sub.basis).dot(&lj.dot(&sub.basis));
            let decomp = eig(&restricted, cfg)?;
            if decomp.defective {
                return Ok(SdsOutcome::NotSds(NotSdsReason::Defective { j: j + 1 }));
            }
            for cluster in spectral_clusters(&decomp.values, fine_tol) {
                let mut vecs = CMat::zeros((k, cluster.members.len()));
                for (c, &idx) in cluster.members.iter().enumerate() {
                    vecs.column_mut(c).assign(&decomp.vectors.column(idx));
                }
                let basis = if cluster.members.len() == k {
                    // eigenvalue is scalar on the whole subspace: keep the
                    // existing orthonormal basis
                    sub.basis.clone()
                } else {
                    let (q, _) = vecs.qr()?;
                    sub.basis.dot(&q)
                };
                let mut tuple = sub.tuple.clone();
                tuple.push(cluster.center);
                next.push(Subspace { basis, tuple });
            }
        }
        subspaces = next;
    }

    let tol_per_matrix: Vec<f64> = f
        .l
        .iter()
        .map(|lj| cfg.eig_cluster_tol * max_abs(lj).max(1.0))
        .collect();
    subspaces.sort_by(|a, b| tuple_order(&a.tuple, &b.tuple, &tol_per_matrix));

    let mut p = CMat::zeros((r, 0));
    let mut blocks = Vec::with_capacity(subspaces.len());
    let mut start = 0;
    for sub in subspaces {
        let size = sub.basis.ncols();
        p = hcat(&p, &sub.basis)?;
        blocks.push(JointBlock { start, size, tuple: sub.tuple });
        start += size;
    }
    Ok(SdsOutcome::Sds(SdsSuccess { p, blocks }))
}

/// Lexicographic (Re, Im) tuple order, tolerance-aware so that numerically
/// equal entries never destabilize the ordering of later entries.
fn tuple_order(a: &[Complex64], b: &[Complex64], tols: &[f64]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    for ((x, y), &tol) in a.iter().zip(b).zip(tols) {
        if (x.re - y.re).abs() > tol {
            return x.re.partial_cmp(&y.re).unwrap_or(Ordering::Equal);
        }
        if (x.im - y.im).abs() > tol {
            return x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal);
        }
    }
    Ordering::Equal
}

/// Test-support constructor for families that do not come out of the
/// reduction pipeline.
pub fn reduced_family_from_parts(
    l: Vec<CMat>,
    lambda0: Vec<Complex64>,
) -> ReducedFamily {
    let r = l.first().map(|m| m.nrows()).unwrap_or(0);
    ReducedFamily { l, lambda0, r }
}
