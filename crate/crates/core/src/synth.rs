//! Seeded synthetic instance generators.
//!
//! The positive generator mirrors the blind-source-separation construction
//! `A_j = Q^T D_j Q` with a random invertible mixing matrix and random
//! diagonals; the negative generators embed reduced families that fail the
//! commutation or diagonalizability test and push them through the inverse
//! of the reduction.

use ndarray::Array2;
use ndarray_linalg::{Factorize, Solve};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::{direct_sum, identity, max_abs, symmetrize, transpose, CMat, ZERO};

/// Which failure mode (or none) the generated family exhibits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthKind {
    /// SDC by construction.
    Sdc,
    /// Reduced matrices fail to pairwise commute.
    Noncommuting,
    /// Reduced matrices commute but one is not diagonalizable.
    Defective,
}

impl SynthKind {
    pub fn label(&self) -> &'static str {
        match self {
            SynthKind::Sdc => "sdc",
            SynthKind::Noncommuting => "noncommuting",
            SynthKind::Defective => "defective",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sdc" => Some(SynthKind::Sdc),
            "noncommuting" => Some(SynthKind::Noncommuting),
            "defective" => Some(SynthKind::Defective),
            _ => None,
        }
    }
}

/// The construction data behind a synthetic family: the mixing matrix and
/// the embedded `r x r` symmetric blocks (diagonal for the SDC kind).
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub kind: SynthKind,
    pub q0: CMat,
    pub blocks: Vec<CMat>,
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SynthInstance {
    pub matrices: Vec<CMat>,
    pub ground_truth: GroundTruth,
}

fn sub_rng(seed: u64, kind: SynthKind, attempt: u64) -> ChaCha8Rng {
    let tag = match kind {
        SynthKind::Sdc => 1u64,
        SynthKind::Noncommuting => 2,
        SynthKind::Defective => 3,
    };
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (tag << 56) ^ attempt)
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMat {
    let mut m = Array2::from_elem((rows, cols), ZERO);
    for i in 0..rows {
        for j in 0..cols {
            m[[i, j]] = random_complex(rng);
        }
    }
    m
}

/// Unit-modulus entry with magnitude in [0.5, 2]: keeps diagonals bounded
/// away from zero so the embedded pencil attains rank r robustly.
fn random_diag_entry(rng: &mut ChaCha8Rng) -> Complex64 {
    let mag: f64 = 0.5 + 1.5 * rng.gen::<f64>();
    let phase: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
    Complex64::from_polar(mag, phase)
}

fn condition_estimate(m: &CMat) -> Result<f64> {
    let sv = crate::linalg::singular_values(m)?;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(if smin > 0.0 { smax / smin } else { f64::INFINITY })
}

/// Random mixing matrix with a bounded condition number.
fn random_mixing(rng: &mut ChaCha8Rng, n: usize) -> Result<CMat> {
    loop {
        let q = random_matrix(rng, n, n);
        if condition_estimate(&q)? <= 100.0 {
            return Ok(q);
        }
    }
}

fn embed(q0: &CMat, blocks: &[CMat], n: usize, r: usize) -> Vec<CMat> {
    blocks
        .iter()
        .map(|b| {
            let padded = direct_sum(b, &CMat::zeros((n - r, n - r)));
            symmetrize(&transpose(q0).dot(&padded).dot(q0))
        })
        .collect()
}

/// Generate a seeded synthetic family of `m` symmetric `n x n` matrices
/// with maximum pencil rank `r` and the requested verdict.
pub fn synthesize(n: usize, m: usize, r: usize, seed: u64, kind: SynthKind) -> Result<SynthInstance> {
    if r < 1 || r > n || m < 1 {
        return Err(Error::InvalidSynthParams(format!(
            "need 1 <= r <= n and m >= 1, got n = {n}, m = {m}, r = {r}"
        )));
    }
    if kind != SynthKind::Sdc && (r < 2 || m < 2) {
        return Err(Error::InvalidSynthParams(format!(
            "{} families need r >= 2 and m >= 2, got m = {m}, r = {r}",
            kind.label()
        )));
    }
    // With two members the reduced matrices always commute: evaluating the
    // pencil combination at the witness gives c1 L_1 + c2 L_2 = I, so L_2
    // is an affine function of L_1. Non-commutation needs a third member.
    if kind == SynthKind::Noncommuting && m < 3 {
        return Err(Error::InvalidSynthParams(format!(
            "noncommuting families need m >= 3, got m = {m}"
        )));
    }

    for attempt in 0..64u64 {
        let mut rng = sub_rng(seed, kind, attempt);
        let q0 = random_mixing(&mut rng, n)?;
        let blocks = match kind {
            SynthKind::Sdc => sdc_blocks(&mut rng, m, r),
            SynthKind::Noncommuting => {
                match noncommuting_blocks(&mut rng, m, r)? {
                    Some(b) => b,
                    None => continue,
                }
            }
            SynthKind::Defective => defective_blocks(&mut rng, m, r),
        };
        let matrices = embed(&q0, &blocks, n, r);
        return Ok(SynthInstance {
            matrices,
            ground_truth: GroundTruth { kind, q0, blocks, n, m, r, seed },
        });
    }
    Err(Error::InvalidSynthParams(format!(
        "could not realize a {} family with n = {n}, m = {m}, r = {r}",
        kind.label()
    )))
}

fn sdc_blocks(rng: &mut ChaCha8Rng, m: usize, r: usize) -> Vec<CMat> {
    (0..m)
        .map(|_| {
            let mut d = CMat::zeros((r, r));
            for i in 0..r {
                d[[i, i]] = random_diag_entry(rng);
            }
            d
        })
        .collect()
}

/// Random symmetric blocks; their reduced matrices fail to commute with
/// probability 1 for r >= 2, verified before returning.
fn noncommuting_blocks(rng: &mut ChaCha8Rng, m: usize, r: usize) -> Result<Option<Vec<CMat>>> {
    let blocks: Vec<CMat> = (0..m).map(|_| symmetrize(&random_matrix(rng, r, r))).collect();

    let lambda: Vec<Complex64> = (0..m).map(|_| random_complex(rng)).collect();
    let mut at = CMat::zeros((r, r));
    for (c, b) in lambda.iter().zip(&blocks) {
        at = at + b.mapv(|z| z * *c);
    }
    if condition_estimate(&at)? > 1e6 {
        return Ok(None);
    }
    let lu = at.factorize()?;
    let mut l = Vec::with_capacity(m);
    for b in &blocks {
        let mut lj = CMat::zeros((r, r));
        for col in 0..r {
            let x = lu.solve(&b.column(col).to_owned())?;
            lj.column_mut(col).assign(&x);
        }
        l.push(lj);
    }
    let mut worst = 0.0f64;
    for j in 0..m {
        for k in (j + 1)..m {
            let comm = l[j].dot(&l[k]) - l[k].dot(&l[j]);
            let scale = max_abs(&l[j]).max(1e-300) * max_abs(&l[k]).max(1e-300);
            worst = worst.max(max_abs(&comm) / scale);
        }
    }
    if worst < 1e-3 {
        return Ok(None);
    }
    Ok(Some(blocks))
}

/// Commuting-but-defective blocks. With `E` the 2x2 antidiagonal and `J` a
/// 2x2 Jordan block, `E` and `E J` are both symmetric and the reduced
/// matrices become rational functions of `J (+) diag(...)`: they commute,
/// and the Jordan structure survives for a generic witness.
fn defective_blocks(rng: &mut ChaCha8Rng, m: usize, r: usize) -> Vec<CMat> {
    let mu = 0.5 + rng.gen::<f64>();
    let mut base = CMat::zeros((r, r));
    base[[0, 0]] = Complex64::new(mu, 0.0);
    base[[0, 1]] = Complex64::new(1.0, 0.0);
    base[[1, 1]] = Complex64::new(mu, 0.0);
    for i in 2..r {
        // well separated from mu and from each other
        let jitter = 0.2 * rng.gen::<f64>();
        base[[i, i]] = Complex64::new(mu + 1.0 + (i - 1) as f64 + jitter, 0.0);
    }

    let mut flip = CMat::zeros((2, 2));
    flip[[0, 1]] = Complex64::new(1.0, 0.0);
    flip[[1, 0]] = Complex64::new(1.0, 0.0);
    let a1 = direct_sum(&flip, &identity(r - 2));
    let a2 = a1.dot(&base);

    let mut blocks = vec![a1.clone(), symmetrize(&a2)];
    for _ in 2..m {
        let c = random_complex(rng);
        let e = {
            // keep the Jordan-carrying coefficient bounded away from zero
            let z = random_complex(rng);
            let mag = z.norm().max(0.5);
            Complex64::from_polar(mag, z.arg())
        };
        blocks.push(a1.mapv(|z| z * c) + blocks[1].mapv(|z| z * e));
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::is_symmetric;
    use crate::pencil::LinearPencil;
    use crate::reduction::kernel_intersection;
    use crate::tol::ToleranceConfig;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn sdc_instance_shapes_and_symmetry() {
        let inst = synthesize(4, 3, 2, 7, SynthKind::Sdc).unwrap();
        assert_eq!(inst.matrices.len(), 3);
        for a in &inst.matrices {
            assert_eq!(a.dim(), (4, 4));
            assert!(is_symmetric(a, 1e-10));
        }
    }

    #[test]
    fn sdc_instance_has_expected_kernel_dimension() {
        let inst = synthesize(3, 2, 2, 1, SynthKind::Sdc).unwrap();
        let p = LinearPencil::new(inst.matrices, &cfg()).unwrap();
        let k = kernel_intersection(&p, &cfg()).unwrap();
        assert_eq!(k.ncols(), 1);
        let w = p.max_rank_point(&cfg()).unwrap();
        assert_eq!(w.r, 2);
    }

    #[test]
    fn generation_is_deterministic_in_the_seed() {
        let a = synthesize(5, 2, 3, 42, SynthKind::Sdc).unwrap();
        let b = synthesize(5, 2, 3, 42, SynthKind::Sdc).unwrap();
        for (x, y) in a.matrices.iter().zip(&b.matrices) {
            assert_eq!(x, y);
        }
        let c = synthesize(5, 2, 3, 43, SynthKind::Sdc).unwrap();
        assert_ne!(a.matrices[0], c.matrices[0]);
    }

    #[test]
    fn negative_kinds_reject_degenerate_shapes() {
        assert!(synthesize(3, 1, 2, 0, SynthKind::Noncommuting).is_err());
        assert!(synthesize(3, 2, 2, 0, SynthKind::Noncommuting).is_err());
        assert!(synthesize(3, 2, 1, 0, SynthKind::Defective).is_err());
        assert!(synthesize(2, 2, 3, 0, SynthKind::Sdc).is_err());
        assert!(synthesize(2, 0, 1, 0, SynthKind::Sdc).is_err());
    }

    #[test]
    fn defective_blocks_are_symmetric_and_commuting_after_reduction() {
        let inst = synthesize(4, 3, 3, 11, SynthKind::Defective).unwrap();
        for b in &inst.ground_truth.blocks {
            assert!(is_symmetric(b, 1e-12));
        }
    }
}
