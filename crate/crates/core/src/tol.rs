use crate::error::{Error, Result};

/// Every numerical threshold used by the pipeline, plus the RNG seed that
/// drives the max-rank search and the synthetic generators.
#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceConfig {
    /// Relative singular-value cutoff for numerical rank:
    /// sigma_i > rank_rel_tol * max(rows, cols) * sigma_max counts toward the rank.
    pub rank_rel_tol: f64,
    /// Relative merge distance for eigenvalue clustering.
    pub eig_cluster_tol: f64,
    /// Relative acceptance threshold for all residual checks
    /// (commutators, off-diagonal blocks, certificate verification).
    pub residual_tol: f64,
    /// Number of random candidate points tried by the max-rank search,
    /// in addition to the deterministic candidates.
    pub max_rank_samples: usize,
    /// Seed for all internal randomness.
    pub rng_seed: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            rank_rel_tol: 1e-10,
            eig_cluster_tol: 1e-8,
            residual_tol: 1e-8,
            max_rank_samples: 32,
            rng_seed: 0,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rank_rel_tol > 0.0) {
            return Err(Error::InvalidTolerance("rank_rel_tol must be strictly positive"));
        }
        if !(self.eig_cluster_tol > 0.0) {
            return Err(Error::InvalidTolerance("eig_cluster_tol must be strictly positive"));
        }
        if !(self.residual_tol > 0.0) {
            return Err(Error::InvalidTolerance("residual_tol must be strictly positive"));
        }
        if self.max_rank_samples < 1 {
            return Err(Error::InvalidTolerance("max_rank_samples must be at least 1"));
        }
        Ok(())
    }

    /// Same configuration with a different seed. Used by witness-independence checks.
    pub fn with_seed(&self, seed: u64) -> Self {
        ToleranceConfig { rng_seed: seed, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        assert!(ToleranceConfig::default().validate().is_ok());
    }

    #[test]
    fn rejects_nonpositive_tolerances() {
        let mut cfg = ToleranceConfig::default();
        cfg.rank_rel_tol = 0.0;
        assert!(cfg.validate().is_err());

        let mut cfg = ToleranceConfig::default();
        cfg.residual_tol = -1.0;
        assert!(cfg.validate().is_err());

        let mut cfg = ToleranceConfig::default();
        cfg.eig_cluster_tol = f64::NAN;
        assert!(cfg.validate().is_err());

        let mut cfg = ToleranceConfig::default();
        cfg.max_rank_samples = 0;
        assert!(cfg.validate().is_err());
    }
}
