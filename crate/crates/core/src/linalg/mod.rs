//! Numerical kernels: rank, nullspace, eigendecomposition, Takagi
//! factorization. Everything is SVD- or LAPACK-backed with explicit
//! tolerance contracts; no kernel mutates its input.

mod eig;
mod rank;
mod takagi;

pub use eig::{eig, spectral_clusters, Eigen, SpectralCluster};
pub use rank::{nullspace_basis, numerical_rank, singular_values};
pub use takagi::takagi;
