//! The linear pencil `A(lambda) = sum_j lambda_j A_j` and the search for a
//! maximum-rank point.

use ndarray::Array2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, singular_values};
use crate::matrix::{require_symmetric, CMat, ZERO};
use crate::tol::ToleranceConfig;

/// A family of `m` symmetric `n x n` complex matrices, viewed as the linear
/// map `lambda -> sum_j lambda_j A_j`.
#[derive(Debug, Clone)]
pub struct LinearPencil {
    matrices: Vec<CMat>,
    n: usize,
}

/// The maximum pencil rank `r` together with a unit-norm point attaining it.
#[derive(Debug, Clone)]
pub struct MaxRankWitness {
    pub r: usize,
    pub lambda0: Vec<Complex64>,
    /// Ratio sigma_r / sigma_{r+1} at the witness (infinite when the
    /// evaluation has full rank or exact nullity); a small gap flags a
    /// borderline rank decision.
    pub sv_gap: f64,
}

impl LinearPencil {
    /// Validates squareness, equal dimensions, and symmetry of every member.
    pub fn new(matrices: Vec<CMat>, cfg: &ToleranceConfig) -> Result<Self> {
        cfg.validate()?;
        if matrices.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let n = matrices[0].nrows();
        for (j, a) in matrices.iter().enumerate() {
            if a.dim() != (n, n) {
                return Err(Error::DimensionMismatch {
                    context: format!(
                        "matrix {} is {}x{}, expected {n}x{n}",
                        j + 1,
                        a.nrows(),
                        a.ncols()
                    ),
                });
            }
            require_symmetric(a, cfg.residual_tol)?;
        }
        Ok(LinearPencil { matrices, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    /// `A(lambda) = sum_j lambda_j A_j`.
    pub fn evaluate(&self, lambda: &[Complex64]) -> Result<CMat> {
        if lambda.len() != self.m() {
            return Err(Error::DimensionMismatch {
                context: format!("lambda has length {}, pencil has m = {}", lambda.len(), self.m()),
            });
        }
        let mut acc = Array2::from_elem((self.n, self.n), ZERO);
        for (c, a) in lambda.iter().zip(&self.matrices) {
            if *c != ZERO {
                acc = acc + a.mapv(|z| z * *c);
            }
        }
        Ok(acc)
    }

    /// Search for the maximum pencil rank.
    ///
    /// The rank-deficient set of a pencil is a proper algebraic subset, so a
    /// random complex Gaussian point attains the maximum with probability 1.
    /// The candidate list is deterministic given the seed: the `m` standard
    /// basis vectors, the normalized all-ones vector, then
    /// `max_rank_samples` seeded Gaussian draws; the first candidate
    /// attaining the best rank wins, which prefers basis vectors on ties.
    pub fn max_rank_point(&self, cfg: &ToleranceConfig) -> Result<MaxRankWitness> {
        let m = self.m();
        let mut candidates: Vec<Vec<Complex64>> = Vec::with_capacity(m + 1 + cfg.max_rank_samples);
        for j in 0..m {
            let mut e = vec![ZERO; m];
            e[j] = Complex64::new(1.0, 0.0);
            candidates.push(e);
        }
        let ones_scale = 1.0 / (m as f64).sqrt();
        candidates.push(vec![Complex64::new(ones_scale, 0.0); m]);

        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        for _ in 0..cfg.max_rank_samples {
            let mut v: Vec<Complex64> = (0..m)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re, im)
                })
                .collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            for z in &mut v {
                *z /= norm;
            }
            candidates.push(v);
        }

        let mut best_rank = 0usize;
        let mut best_lambda: Vec<Complex64> = candidates[0].clone();
        for lambda in &candidates {
            let a = self.evaluate(lambda)?;
            let rank = numerical_rank(&a, cfg)?;
            if rank > best_rank {
                best_rank = rank;
                best_lambda = lambda.clone();
                if best_rank == self.n {
                    break;
                }
            }
        }

        let sv = singular_values(&self.evaluate(&best_lambda)?)?;
        let sv_gap = if best_rank == 0 || best_rank >= self.n {
            f64::INFINITY
        } else if sv[best_rank] > 0.0 {
            sv[best_rank - 1] / sv[best_rank]
        } else {
            f64::INFINITY
        };

        Ok(MaxRankWitness { r: best_rank, lambda0: best_lambda, sv_gap })
    }
}
