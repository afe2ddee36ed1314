//! Orchestration of the full decision procedure: maximum-rank witness,
//! kernel reduction, reduced-family SDS test, congruence assembly, and
//! certificate verification.

use ndarray::{s, Array1};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::takagi;
use crate::matrix::{
    block_diag, congruate, direct_sum, identity, max_abs, CMat, CVec, ZERO,
};
use crate::pencil::{LinearPencil, MaxRankWitness};
use crate::reduction::{reduce, ReduceOutcome, ReductionResult};
use crate::sds::{build_reduced_family, joint_diagonalize, NotSdsReason, SdsOutcome, SdsSuccess};
use crate::tol::ToleranceConfig;

/// Why a family is not SDC. Indices are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub enum NotSdcReason {
    /// `dim(intersection of kernels) < n - r`.
    KernelDeficit { dim: usize, expected: usize },
    /// Reduced matrices `L_j`, `L_k` do not commute.
    NonCommuting { j: usize, k: usize },
    /// Reduced matrix `L_j` is not diagonalizable.
    Defective { j: usize },
}

impl NotSdcReason {
    pub fn label(&self) -> &'static str {
        match self {
            NotSdcReason::KernelDeficit { .. } => "kernel-deficit",
            NotSdcReason::NonCommuting { .. } => "non-commuting",
            NotSdcReason::Defective { .. } => "defective",
        }
    }
}

#[derive(Debug)]
pub enum SdcVerdict {
    Sdc {
        /// Invertible `n x n` congruence transform.
        p: CMat,
        /// Diagonals of `P^T A_j P`; the trailing `n - r` entries are
        /// exactly zero.
        diagonals: Vec<CVec>,
    },
    NotSdc(NotSdcReason),
}

/// Tolerance-margin diagnostics attached to every certificate.
#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    /// Largest discarded off-block entry during reduction.
    pub off_block_max: f64,
    /// Singular-value gap at the witness (small means borderline rank).
    pub witness_sv_gap: f64,
    /// Measured dimension of the kernel intersection.
    pub kernel_dim: usize,
    /// Condition estimate of the emitted transform (SDC only).
    pub condition_p: Option<f64>,
}

#[derive(Debug)]
pub struct SdcCertificate {
    pub verdict: SdcVerdict,
    pub witness: MaxRankWitness,
    /// Max relative off-diagonal magnitude of the verified transform
    /// (0 when the verdict is NotSDC).
    pub residual: f64,
    /// Set when the residual is within a factor 10 of the acceptance
    /// threshold.
    pub marginal: bool,
    pub diagnostics: Diagnostics,
}

impl SdcCertificate {
    pub fn is_sdc(&self) -> bool {
        matches!(self.verdict, SdcVerdict::Sdc { .. })
    }
}

/// Column grouping of the joint eigenbasis by identical eigenvalue tuple.
#[derive(Debug, Clone)]
pub struct BlockGrouping {
    /// Block sizes `p_1 ... p_d`, summing to `r`.
    pub sizes: Vec<usize>,
    /// The `d` distinct joint eigenvalue tuples.
    pub tuples: Vec<Vec<Complex64>>,
}

/// Group adjacent joint blocks whose tuples coincide within the clustering
/// tolerance. Blocks arrive sorted, so equal tuples are adjacent.
pub fn block_grouping(sds: &SdsSuccess, scales: &[f64], cfg: &ToleranceConfig) -> BlockGrouping {
    let mut sizes: Vec<usize> = Vec::new();
    let mut tuples: Vec<Vec<Complex64>> = Vec::new();
    for b in &sds.blocks {
        let same = tuples.last().is_some_and(|t: &Vec<Complex64>| {
            t.iter()
                .zip(&b.tuple)
                .zip(scales)
                .all(|((x, y), &s)| (x - y).norm() <= cfg.eig_cluster_tol * s.max(1.0))
        });
        if same {
            *sizes.last_mut().unwrap() += b.size;
        } else {
            sizes.push(b.size);
            tuples.push(b.tuple.clone());
        }
    }
    BlockGrouping { sizes, tuples }
}

/// Assemble the congruence transform from the reduction and the joint
/// eigenbasis: Takagi-diagonalize the diagonal blocks of
/// `B(lambda0) = P_sds^T A~(lambda0) P_sds`, then lift through the
/// reduction basis.
pub fn assemble_congruence(
    rr: &ReductionResult,
    sds: &SdsSuccess,
    w: &MaxRankWitness,
    cfg: &ToleranceConfig,
) -> Result<(CMat, Vec<CVec>)> {
    let n = rr.q.nrows();
    let r = rr.r;
    let m = rr.reduced.len();

    if r == 0 {
        let diagonals = vec![Array1::from_elem(n, ZERO); m];
        return Ok((rr.q.clone(), diagonals));
    }

    let scales: Vec<f64> = rr.reduced.iter().map(max_abs).collect();
    let grouping = block_grouping(sds, &scales, cfg);

    let mut a_at_witness = CMat::zeros((r, r));
    for (c, a) in w.lambda0.iter().zip(&rr.reduced) {
        a_at_witness = a_at_witness + a.mapv(|z| z * *c);
    }
    let b = congruate(&a_at_witness, &sds.p);
    let b_scale = max_abs(&b).max(1.0);

    // Off-diagonal blocks of B(lambda0) must vanish: commutation with the
    // distinct-tuple diagonal family forces it.
    let mut starts = Vec::with_capacity(grouping.sizes.len());
    let mut off = 0;
    for &sz in &grouping.sizes {
        starts.push(off);
        off += sz;
    }
    let mut worst_off_block = 0.0f64;
    for (gi, (&si, &szi)) in starts.iter().zip(&grouping.sizes).enumerate() {
        for (gj, (&sj, &szj)) in starts.iter().zip(&grouping.sizes).enumerate() {
            if gi == gj {
                continue;
            }
            let blk = b.slice(s![si..si + szi, sj..sj + szj]);
            let mag = blk.iter().map(|z| z.norm()).fold(0.0, f64::max);
            worst_off_block = worst_off_block.max(mag);
        }
    }
    let allowed = cfg.residual_tol * b_scale * 100.0;
    if worst_off_block > allowed {
        return Err(Error::OffBlockResidual { magnitude: worst_off_block, allowed });
    }

    // Takagi-factor each diagonal block C_a.
    let mut v_blocks = Vec::with_capacity(grouping.sizes.len());
    let mut d_entries: Vec<f64> = Vec::with_capacity(r);
    for (&sa, &sz) in starts.iter().zip(&grouping.sizes) {
        let c_a = b.slice(s![sa..sa + sz, sa..sa + sz]).to_owned();
        let (v_a, d_a) = takagi(&c_a, cfg)?;
        v_blocks.push(v_a);
        d_entries.extend(d_a.iter());
    }

    let p_r = sds.p.dot(&block_diag(&v_blocks));
    let p_full = rr.q.dot(&direct_sum(&p_r, &identity(n - r)));

    // D_j = D * (alpha_1^{(j)} I ⊕ ... ⊕ alpha_d^{(j)} I), padded with zeros.
    let mut diagonals = Vec::with_capacity(m);
    for j in 0..m {
        let mut dj = Array1::from_elem(n, ZERO);
        for (g, (&sa, &sz)) in starts.iter().zip(&grouping.sizes).enumerate() {
            let alpha = grouping.tuples[g][j];
            for i in sa..sa + sz {
                dj[i] = alpha * Complex64::new(d_entries[i], 0.0);
            }
        }
        diagonals.push(dj);
    }

    Ok((p_full, diagonals))
}

/// Residual report for a claimed congruence transform.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    /// `max_j max_{k != l} |(P^T A_j P)_{kl}| / max(1, max_j ||A_j||)`.
    pub residual: f64,
    /// Condition estimate `sigma_max / sigma_min` of `P`.
    pub condition_p: f64,
    /// Measured diagonal of each `P^T A_j P`.
    pub diagonals: Vec<CVec>,
    pub pass: bool,
}

/// Recompute every `P^T A_j P` and measure how diagonal it is. A singular
/// `P` fails the report rather than erroring.
pub fn verify_certificate(
    p: &LinearPencil,
    transform: &CMat,
    cfg: &ToleranceConfig,
) -> Result<VerificationReport> {
    let n = p.n();
    if transform.dim() != (n, n) {
        return Err(Error::DimensionMismatch {
            context: format!(
                "transform is {}x{}, family is {n}x{n}",
                transform.nrows(),
                transform.ncols()
            ),
        });
    }
    let sv = crate::linalg::singular_values(transform)?;
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let rank = crate::linalg::numerical_rank(transform, cfg)?;
    let singular = rank < n;
    let condition_p = if smin > 0.0 { smax / smin } else { f64::INFINITY };

    let family_scale = p.matrices().iter().map(max_abs).fold(0.0, f64::max).max(1.0);
    let mut worst = 0.0f64;
    let mut diagonals = Vec::with_capacity(p.m());
    for a in p.matrices() {
        let t = congruate(a, transform);
        let mut dj = Array1::from_elem(n, ZERO);
        for i in 0..n {
            dj[i] = t[[i, i]];
            for j in 0..n {
                if i != j {
                    worst = worst.max(t[[i, j]].norm());
                }
            }
        }
        diagonals.push(dj);
    }
    let residual = worst / family_scale;
    let pass = !singular && residual <= cfg.residual_tol;
    Ok(VerificationReport { residual, condition_p, diagonals, pass })
}

/// Run the full three-step procedure and return a verified certificate.
pub fn decide_sdc(p: &LinearPencil, cfg: &ToleranceConfig) -> Result<SdcCertificate> {
    cfg.validate()?;
    let witness = p.max_rank_point(cfg)?;

    let rr = match reduce(p, &witness, cfg)? {
        ReduceOutcome::KernelDeficit { dim, expected } => {
            return Ok(SdcCertificate {
                verdict: SdcVerdict::NotSdc(NotSdcReason::KernelDeficit { dim, expected }),
                residual: 0.0,
                marginal: false,
                diagnostics: Diagnostics {
                    kernel_dim: dim,
                    witness_sv_gap: witness.sv_gap,
                    ..Default::default()
                },
                witness,
            });
        }
        ReduceOutcome::Reduced(rr) => rr,
    };

    let family = build_reduced_family(&rr, &witness, cfg)?;
    let sds = match joint_diagonalize(&family, cfg)? {
        SdsOutcome::NotSds(reason) => {
            let reason = match reason {
                NotSdsReason::NonCommuting { j, k } => NotSdcReason::NonCommuting { j, k },
                NotSdsReason::Defective { j } => NotSdcReason::Defective { j },
            };
            return Ok(SdcCertificate {
                verdict: SdcVerdict::NotSdc(reason),
                residual: 0.0,
                marginal: false,
                diagnostics: Diagnostics {
                    kernel_dim: rr.kernel_basis.ncols(),
                    off_block_max: rr.off_block_max,
                    witness_sv_gap: witness.sv_gap,
                    ..Default::default()
                },
                witness,
            });
        }
        SdsOutcome::Sds(s) => s,
    };

    let (transform, diagonals) = assemble_congruence(&rr, &sds, &witness, cfg)?;
    let report = verify_certificate(p, &transform, cfg)?;
    if !report.pass {
        return Err(Error::VerificationFailed {
            residual: report.residual,
            allowed: cfg.residual_tol,
        });
    }

    Ok(SdcCertificate {
        verdict: SdcVerdict::Sdc { p: transform, diagonals },
        residual: report.residual,
        marginal: report.residual > cfg.residual_tol / 10.0,
        diagnostics: Diagnostics {
            kernel_dim: rr.kernel_basis.ncols(),
            off_block_max: rr.off_block_max,
            witness_sv_gap: witness.sv_gap,
            condition_p: Some(report.condition_p),
        },
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{from_real_rows, transpose};

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn example_sdc_pair() -> LinearPencil {
        let a1 = from_real_rows(&[vec![0.0, 1.0], vec![1.0, 1.0]]);
        let a2 = from_real_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]);
        LinearPencil::new(vec![a1, a2], &cfg()).unwrap()
    }

    fn example_deficit_pair() -> LinearPencil {
        let a1 = from_real_rows(&[vec![1.0, 1.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 0.0]]);
        let a2 = from_real_rows(&[vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]]);
        LinearPencil::new(vec![a1, a2], &cfg()).unwrap()
    }

    #[test]
    fn full_rank_pair_is_sdc_with_verified_transform() {
        let p = example_sdc_pair();
        let cert = decide_sdc(&p, &cfg()).unwrap();
        assert!(cert.is_sdc());
        assert!(cert.residual <= 1e-10);
        match &cert.verdict {
            SdcVerdict::Sdc { p: t, diagonals } => {
                let report = verify_certificate(&p, t, &cfg()).unwrap();
                assert!(report.pass);
                for (dj, measured) in diagonals.iter().zip(&report.diagonals) {
                    for (a, b) in dj.iter().zip(measured.iter()) {
                        assert!((a - b).norm() <= 1e-9);
                    }
                }
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn deficit_pair_is_refuted_by_kernel_dimension() {
        let cert = decide_sdc(&example_deficit_pair(), &cfg()).unwrap();
        match cert.verdict {
            SdcVerdict::NotSdc(NotSdcReason::KernelDeficit { dim, expected }) => {
                assert_eq!(dim, 0);
                assert_eq!(expected, 1);
            }
            other => panic!("expected kernel deficit, got {other:?}"),
        }
        assert_eq!(cert.witness.r, 2);
    }

    #[test]
    fn zero_family_is_vacuously_sdc() {
        let p = LinearPencil::new(vec![CMat::zeros((3, 3))], &cfg()).unwrap();
        let cert = decide_sdc(&p, &cfg()).unwrap();
        match &cert.verdict {
            SdcVerdict::Sdc { p: t, diagonals } => {
                assert_eq!(crate::linalg::numerical_rank(t, &cfg()).unwrap(), 3);
                assert!(diagonals[0].iter().all(|z| *z == ZERO));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn projector_plus_swap_is_not_sdc() {
        // A1 = diag(1, 0), A2 = antidiagonal: the reduced family either
        // fails to commute or is defective for every max-rank point.
        let a1 = from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
        let a2 = from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let p = LinearPencil::new(vec![a1, a2], &cfg()).unwrap();
        let cert = decide_sdc(&p, &cfg()).unwrap();
        assert!(!cert.is_sdc());
    }

    #[test]
    fn verify_rejects_identity_on_nondiagonal_family() {
        let p = example_sdc_pair();
        let report = verify_certificate(&p, &identity(2), &cfg()).unwrap();
        assert!(!report.pass);
        assert!(report.residual >= 0.5);
    }

    #[test]
    fn verify_passes_identity_on_identity_family() {
        let p = LinearPencil::new(vec![identity(4)], &cfg()).unwrap();
        let report = verify_certificate(&p, &identity(4), &cfg()).unwrap();
        assert!(report.pass);
        assert_eq!(report.residual, 0.0);
    }

    #[test]
    fn verify_flags_singular_transform() {
        let p = LinearPencil::new(vec![identity(2)], &cfg()).unwrap();
        let singular = from_real_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        let report = verify_certificate(&p, &singular, &cfg()).unwrap();
        assert!(!report.pass);
        assert!(report.condition_p > 1e12);
    }

    #[test]
    fn transpose_convention_sanity() {
        // P^T A P, not P^H A P: complex entries must not be conjugated.
        let a = identity(1);
        let p_mat = CMat::from_elem((1, 1), Complex64::new(0.0, 1.0));
        let t = congruate(&a, &p_mat);
        assert!((t[[0, 0]] - Complex64::new(-1.0, 0.0)).norm() <= 1e-15);
        let _ = transpose(&p_mat);
    }
}
