//! Simultaneous diagonalization of complex symmetric matrix families by
//! congruence.
//!
//! Given symmetric matrices `A_1, ..., A_m` over the complex numbers, this
//! crate decides whether an invertible `P` exists with every `P^T A_j P`
//! diagonal, and when one does, constructs and verifies it. The pipeline:
//!
//! 1. find a point of maximum rank `r` of the pencil `A(lambda)` ([`pencil`]);
//! 2. compare the common kernel dimension against `n - r` and cut the family
//!    down to an `r x r` block ([`reduction`]);
//! 3. test the reduced family for simultaneous diagonalization by
//!    *similarity*, which holds iff the matrices pairwise commute and each is
//!    diagonalizable ([`sds`]);
//! 4. assemble the congruence from a joint eigenbasis and per-block Takagi
//!    factorizations, then verify the residual ([`sdc`]).
//!
//! [`synth`] generates seeded positive and negative test families,
//! [`formats`] reads and writes the JSON file formats, and [`evolution`]
//! adapts structure tensors of commutative algebras to the decision.

pub mod error;
pub mod evolution;
pub mod formats;
pub mod linalg;
pub mod matrix;
pub mod pencil;
pub mod reduction;
pub mod sdc;
pub mod sds;
pub mod synth;
pub mod tol;

pub use error::{Error, Result};
pub use matrix::{CMat, CVec};
pub use pencil::{LinearPencil, MaxRankWitness};
pub use reduction::{reduce, ReduceOutcome, ReductionResult};
pub use sdc::{decide_sdc, verify_certificate, NotSdcReason, SdcCertificate, SdcVerdict};
pub use sds::{joint_diagonalize, NotSdsReason, SdsOutcome};
pub use synth::{synthesize, SynthInstance, SynthKind};
pub use tol::ToleranceConfig;
