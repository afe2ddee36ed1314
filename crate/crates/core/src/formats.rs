//! JSON file formats: matrix sets, congruence transforms, structure
//! tensors, and synthesis ground-truth sidecars.
//!
//! Complex scalars are stored as two-element `[re, im]` arrays. Writing is
//! canonical: fixed key order, two-space indentation, floats rendered with
//! 17 significant digits, so `write(read(f)) == f` for files produced here.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::{require_symmetric, CMat};
use crate::synth::{GroundTruth, SynthKind};
use crate::tol::ToleranceConfig;

/// A named family of symmetric matrices plus free-form metadata.
#[derive(Debug, Clone)]
pub struct MatrixSetFile {
    pub name: Option<String>,
    pub n: usize,
    pub m: usize,
    pub matrices: Vec<CMat>,
    pub metadata: Option<Value>,
}

/// A congruence transform `P` and the diagonals of `P^T A_j P`.
#[derive(Debug, Clone)]
pub struct TransformFile {
    pub n: usize,
    pub m: usize,
    pub p: CMat,
    pub diagonals: Vec<Vec<Complex64>>,
}

/// A cubic array `entries[i][j][k]` of multiplication coefficients for a
/// commutative algebra basis.
#[derive(Debug, Clone)]
pub struct StructureTensorFile {
    pub n: usize,
    pub entries: Vec<Vec<Vec<Complex64>>>,
}

// ---------------------------------------------------------------------------
// canonical writer

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_c(z: Complex64) -> String {
    format!("[{}, {}]", fmt_f(z.re), fmt_f(z.im))
}

fn fmt_row(row: impl Iterator<Item = Complex64>) -> String {
    let cells: Vec<String> = row.map(fmt_c).collect();
    format!("[{}]", cells.join(", "))
}

fn push_matrix(out: &mut String, m: &CMat, indent: &str) {
    out.push_str("[\n");
    let rows = m.nrows();
    for i in 0..rows {
        out.push_str(indent);
        out.push_str("  ");
        out.push_str(&fmt_row(m.row(i).iter().cloned()));
        if i + 1 < rows {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str(indent);
    out.push(']');
}

fn check_finite(m: &CMat) -> Result<()> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Format("non-finite matrix entry".into()));
    }
    Ok(())
}

pub fn write_matrix_set(f: &MatrixSetFile) -> Result<String> {
    for m in &f.matrices {
        check_finite(m)?;
    }
    let mut out = String::new();
    out.push_str("{\n  \"kind\": \"matrix-set\",\n");
    if let Some(name) = &f.name {
        out.push_str(&format!("  \"name\": {},\n", Value::String(name.clone())));
    }
    out.push_str(&format!("  \"n\": {},\n  \"m\": {},\n", f.n, f.m));
    out.push_str("  \"matrices\": [\n");
    for (idx, m) in f.matrices.iter().enumerate() {
        out.push_str("    ");
        push_matrix(&mut out, m, "    ");
        if idx + 1 < f.matrices.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ]");
    if let Some(meta) = &f.metadata {
        out.push_str(",\n  \"metadata\": ");
        out.push_str(&serde_json::to_string(meta)?);
    }
    out.push_str("\n}\n");
    Ok(out)
}

pub fn write_transform(f: &TransformFile) -> Result<String> {
    check_finite(&f.p)?;
    let mut out = String::new();
    out.push_str("{\n  \"kind\": \"congruence-transform\",\n");
    out.push_str(&format!("  \"n\": {},\n  \"m\": {},\n", f.n, f.m));
    out.push_str("  \"p\": ");
    push_matrix(&mut out, &f.p, "  ");
    out.push_str(",\n  \"diagonals\": [\n");
    for (idx, d) in f.diagonals.iter().enumerate() {
        out.push_str("    ");
        out.push_str(&fmt_row(d.iter().cloned()));
        if idx + 1 < f.diagonals.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ]\n}\n");
    Ok(out)
}

pub fn write_structure_tensor(f: &StructureTensorFile) -> Result<String> {
    let mut out = String::new();
    out.push_str("{\n  \"kind\": \"structure-tensor\",\n");
    out.push_str(&format!("  \"n\": {},\n", f.n));
    out.push_str("  \"entries\": [\n");
    for (i, plane) in f.entries.iter().enumerate() {
        out.push_str("    [\n");
        for (j, row) in plane.iter().enumerate() {
            out.push_str("      ");
            out.push_str(&fmt_row(row.iter().cloned()));
            if j + 1 < plane.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("    ]");
        if i + 1 < f.entries.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ]\n}\n");
    Ok(out)
}

/// Sidecar describing how a synthetic family was built.
pub fn write_ground_truth(gt: &GroundTruth) -> Result<String> {
    let mut out = String::new();
    out.push_str("{\n  \"kind\": \"synth-ground-truth\",\n");
    out.push_str(&format!("  \"construction\": \"{}\",\n", gt.kind.label()));
    out.push_str(&format!(
        "  \"n\": {},\n  \"m\": {},\n  \"r\": {},\n  \"seed\": {},\n",
        gt.n, gt.m, gt.r, gt.seed
    ));
    out.push_str("  \"q0\": ");
    push_matrix(&mut out, &gt.q0, "  ");
    out.push_str(",\n  \"blocks\": [\n");
    for (idx, b) in gt.blocks.iter().enumerate() {
        out.push_str("    ");
        push_matrix(&mut out, b, "    ");
        if idx + 1 < gt.blocks.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ]\n}\n");
    Ok(out)
}

// ---------------------------------------------------------------------------
// readers

fn to_complex(pair: &[f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

fn parse_matrix(raw: &[Vec<[f64; 2]>], n: usize, what: &str) -> Result<CMat> {
    if raw.len() != n {
        return Err(Error::Format(format!("{what}: expected {n} rows, got {}", raw.len())));
    }
    let mut m = CMat::zeros((n, n));
    for (i, row) in raw.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Format(format!(
                "{what}: row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (j, pair) in row.iter().enumerate() {
            let z = to_complex(pair);
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::Format(format!("{what}: non-finite entry at ({i}, {j})")));
            }
            m[[i, j]] = z;
        }
    }
    Ok(m)
}

fn expect_kind(found: &str, expected: &str) -> Result<()> {
    if found != expected {
        return Err(Error::Format(format!(
            "expected a \"{expected}\" file, found kind \"{found}\""
        )));
    }
    Ok(())
}

#[derive(Deserialize)]
struct RawMatrixSet {
    kind: String,
    #[serde(default)]
    name: Option<String>,
    n: usize,
    m: usize,
    matrices: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(default)]
    metadata: Option<Value>,
}

/// Parse and validate a matrix-set document: shapes must match the declared
/// `n`/`m` and every matrix must be symmetric within the configured tolerance.
pub fn read_matrix_set(text: &str, cfg: &ToleranceConfig) -> Result<MatrixSetFile> {
    let raw: RawMatrixSet = serde_json::from_str(text)?;
    expect_kind(&raw.kind, "matrix-set")?;
    if raw.n == 0 {
        return Err(Error::Format("n must be positive".into()));
    }
    if raw.matrices.len() != raw.m {
        return Err(Error::Format(format!(
            "declared m = {} but found {} matrices",
            raw.m,
            raw.matrices.len()
        )));
    }
    if raw.m == 0 {
        return Err(Error::EmptyFamily);
    }
    let mut matrices = Vec::with_capacity(raw.m);
    for (idx, rm) in raw.matrices.iter().enumerate() {
        let m = parse_matrix(rm, raw.n, &format!("matrix {idx}"))?;
        require_symmetric(&m, cfg.rank_rel_tol.max(1e-12) * 100.0)?;
        matrices.push(m);
    }
    Ok(MatrixSetFile { name: raw.name, n: raw.n, m: raw.m, matrices, metadata: raw.metadata })
}

#[derive(Deserialize)]
struct RawTransform {
    kind: String,
    n: usize,
    m: usize,
    p: Vec<Vec<[f64; 2]>>,
    diagonals: Vec<Vec<[f64; 2]>>,
}

pub fn read_transform(text: &str) -> Result<TransformFile> {
    let raw: RawTransform = serde_json::from_str(text)?;
    expect_kind(&raw.kind, "congruence-transform")?;
    let p = parse_matrix(&raw.p, raw.n, "p")?;
    if raw.diagonals.len() != raw.m {
        return Err(Error::Format(format!(
            "declared m = {} but found {} diagonals",
            raw.m,
            raw.diagonals.len()
        )));
    }
    let mut diagonals = Vec::with_capacity(raw.m);
    for (idx, row) in raw.diagonals.iter().enumerate() {
        if row.len() != raw.n {
            return Err(Error::Format(format!(
                "diagonal {idx} has {} entries, expected {}",
                row.len(),
                raw.n
            )));
        }
        diagonals.push(row.iter().map(to_complex).collect());
    }
    Ok(TransformFile { n: raw.n, m: raw.m, p, diagonals })
}

#[derive(Deserialize)]
struct RawStructureTensor {
    kind: String,
    n: usize,
    entries: Vec<Vec<Vec<[f64; 2]>>>,
}

/// Parse a structure tensor and verify the commutativity symmetry
/// `entries[i][j][k] == entries[j][i][k]` exactly as stored.
pub fn read_structure_tensor(text: &str) -> Result<StructureTensorFile> {
    let raw: RawStructureTensor = serde_json::from_str(text)?;
    expect_kind(&raw.kind, "structure-tensor")?;
    let n = raw.n;
    if raw.entries.len() != n {
        return Err(Error::Format(format!(
            "expected {n} planes, got {}",
            raw.entries.len()
        )));
    }
    let mut entries = vec![vec![vec![Complex64::default(); n]; n]; n];
    for (i, plane) in raw.entries.iter().enumerate() {
        if plane.len() != n {
            return Err(Error::Format(format!("plane {i} has {} rows, expected {n}", plane.len())));
        }
        for (j, row) in plane.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Format(format!(
                    "entry row ({i}, {j}) has {} values, expected {n}",
                    row.len()
                )));
            }
            for (k, pair) in row.iter().enumerate() {
                entries[i][j][k] = to_complex(pair);
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                if entries[i][j][k] != entries[j][i][k] {
                    return Err(Error::NonCommutativeTensor {
                        i,
                        j,
                        k,
                        lhs: format!("{}", entries[i][j][k]),
                        rhs: format!("{}", entries[j][i][k]),
                    });
                }
            }
        }
    }
    Ok(StructureTensorFile { n, entries })
}

// ---------------------------------------------------------------------------
// path helpers

impl MatrixSetFile {
    pub fn from_matrices(name: Option<String>, matrices: Vec<CMat>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let n = matrices[0].nrows();
        let m = matrices.len();
        Ok(MatrixSetFile { name, n, m, matrices, metadata: None })
    }

    pub fn from_path(path: &Path, cfg: &ToleranceConfig) -> Result<Self> {
        read_matrix_set(&std::fs::read_to_string(path)?, cfg)
    }

    pub fn to_path(&self, path: &Path) -> Result<()> {
        std::fs::write(path, write_matrix_set(self)?)?;
        Ok(())
    }
}

impl TransformFile {
    pub fn from_path(path: &Path) -> Result<Self> {
        read_transform(&std::fs::read_to_string(path)?)
    }

    pub fn to_path(&self, path: &Path) -> Result<()> {
        std::fs::write(path, write_transform(self)?)?;
        Ok(())
    }
}

impl StructureTensorFile {
    pub fn from_path(path: &Path) -> Result<Self> {
        read_structure_tensor(&std::fs::read_to_string(path)?)
    }

    pub fn to_path(&self, path: &Path) -> Result<()> {
        std::fs::write(path, write_structure_tensor(self)?)?;
        Ok(())
    }
}

/// Label used in sidecar filenames and metadata for a synthesis kind.
pub fn synth_kind_label(kind: SynthKind) -> &'static str {
    kind.label()
}
