//! Commutative-algebra front end: turn a structure tensor into a family of
//! symmetric matrices and decide whether the algebra admits a basis in which
//! all multiplication matrices are diagonal.

use crate::error::Result;
use crate::formats::StructureTensorFile;
use crate::matrix::CMat;
use crate::pencil::LinearPencil;
use crate::sdc::{decide_sdc, SdcCertificate};
use crate::tol::ToleranceConfig;

/// The matrices `B_k = (entries[i][j][k])_{i,j}`, one per basis element.
/// Commutativity of the tensor (validated on read) makes each symmetric.
pub fn structure_matrices(t: &StructureTensorFile) -> Vec<CMat> {
    let n = t.n;
    (0..n)
        .map(|k| {
            let mut b = CMat::zeros((n, n));
            for i in 0..n {
                for j in 0..n {
                    b[[i, j]] = t.entries[i][j][k];
                }
            }
            b
        })
        .collect()
}

/// Decide simultaneous diagonalizability by congruence for the family of
/// structure matrices of a commutative algebra.
pub fn decide_structure_tensor(t: &StructureTensorFile, cfg: &ToleranceConfig) -> Result<SdcCertificate> {
    let pencil = LinearPencil::new(structure_matrices(t), cfg)?;
    decide_sdc(&pencil, cfg)
}
