//! Kernel-intersection test and reduction of the `n x n` family to an
//! `r x r` family with a nonsingular pencil.

use ndarray::s;

use crate::error::{Error, Result};
use crate::linalg::{nullspace_basis, numerical_rank};
use crate::matrix::{congruate, hcat, identity, vstack, CMat};
use crate::pencil::{LinearPencil, MaxRankWitness};
use crate::tol::ToleranceConfig;

/// Outcome of the reduction: either the reduced family or the refutation
/// that the kernel intersection is too small.
#[derive(Debug)]
pub enum ReduceOutcome {
    Reduced(ReductionResult),
    /// `dim(intersection of kernels) < n - r`: the family is not SDC.
    KernelDeficit { dim: usize, expected: usize },
}

#[derive(Debug, Clone)]
pub struct ReductionResult {
    /// Unitary `n x n` change of basis; its trailing `n - r` columns span
    /// the kernel intersection.
    pub q: CMat,
    /// The reduced symmetric `r x r` matrices.
    pub reduced: Vec<CMat>,
    /// Orthonormal basis of the kernel intersection, `n x (n - r)`.
    pub kernel_basis: CMat,
    pub r: usize,
    /// Largest discarded off-block entry of any `Q^T A_j Q`; diagnostics.
    pub off_block_max: f64,
}

/// Orthonormal basis of the intersection of the kernels of all family
/// members, computed as the nullspace of the vertical stack `[A_1; ...; A_m]`.
pub fn kernel_intersection(p: &LinearPencil, cfg: &ToleranceConfig) -> Result<CMat> {
    let stack = vstack(&p.matrices().iter().collect::<Vec<_>>())?;
    nullspace_basis(&stack, cfg)
}

/// Reduce the family to its leading `r x r` block in a basis whose trailing
/// vectors span the kernel intersection, or refute SDC by kernel deficit.
pub fn reduce(p: &LinearPencil, w: &MaxRankWitness, cfg: &ToleranceConfig) -> Result<ReduceOutcome> {
    let n = p.n();
    if w.r > n || w.lambda0.len() != p.m() {
        return Err(Error::DimensionMismatch {
            context: format!("witness (r = {}, m = {}) inconsistent with pencil", w.r, w.lambda0.len()),
        });
    }
    let kernel = kernel_intersection(p, cfg)?;
    let dim = kernel.ncols();
    let expected = n - w.r;
    if dim < expected {
        return Ok(ReduceOutcome::KernelDeficit { dim, expected });
    }
    if dim > expected {
        // Contradicts dim <= n - rank A(lambda); the rank tolerance is
        // misconfigured for this input.
        return Err(Error::KernelDimensionExceedsBound { dim, bound: expected });
    }

    // Extend to a full orthonormal basis, kernel vectors last. The
    // complement is the kernel of K^H, i.e. the orthogonal complement.
    let complement = if dim == 0 {
        identity(n)
    } else {
        nullspace_basis(&crate::matrix::adjoint(&kernel), cfg)?
    };
    if complement.ncols() != w.r {
        return Err(Error::DimensionMismatch {
            context: format!(
                "orthonormal complement has {} columns, expected r = {}",
                complement.ncols(),
                w.r
            ),
        });
    }
    let q = hcat(&complement, &kernel)?;

    let mut reduced = Vec::with_capacity(p.m());
    let mut off_block_max = 0.0f64;
    for a in p.matrices() {
        let full = congruate(a, &q);
        for i in 0..n {
            for j in 0..n {
                if i >= w.r || j >= w.r {
                    off_block_max = off_block_max.max(full[[i, j]].norm());
                }
            }
        }
        reduced.push(full.slice(s![..w.r, ..w.r]).to_owned());
    }

    // The reduced pencil must attain rank r at the witness.
    let reduced_pencil_at_witness = {
        let mut acc = CMat::zeros((w.r, w.r));
        for (c, a) in w.lambda0.iter().zip(&reduced) {
            acc = acc + a.mapv(|z| z * *c);
        }
        acc
    };
    let found = numerical_rank(&reduced_pencil_at_witness, cfg)?;
    if found != w.r {
        return Err(Error::WitnessInconsistent { found, expected: w.r });
    }

    Ok(ReduceOutcome::Reduced(ReductionResult { q, reduced, kernel_basis: kernel, r: w.r, off_block_max }))
}
