//! `sdc`: decide simultaneous diagonalizability via congruence of a family
//! of complex symmetric matrices, and construct the transform when one
//! exists.
//!
//! Exit codes: 0 = SDC (or successful synthesis), 1 = not SDC, 2 = usage or
//! input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use sdc_core::formats::{
    write_ground_truth, MatrixSetFile, StructureTensorFile, TransformFile,
};
use sdc_core::sdc::{SdcCertificate, SdcVerdict};
use sdc_core::{decide_sdc, synthesize, LinearPencil, SynthKind, ToleranceConfig};

#[derive(Parser)]
#[command(name = "sdc", version, about = "Simultaneous diagonalization by congruence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct TolArgs {
    /// Relative singular-value cutoff for numerical rank
    #[arg(long = "tol-rank")]
    tol_rank: Option<f64>,
    /// Relative residual acceptance threshold (default 1e-8, or the value
    /// of the SDC_DEFAULT_TOL environment variable)
    #[arg(long = "tol-residual")]
    tol_residual: Option<f64>,
    /// Seed for the max-rank candidate search
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random candidate points in the max-rank search
    #[arg(long)]
    samples: Option<usize>,
}

impl TolArgs {
    fn to_config(&self) -> Result<ToleranceConfig, String> {
        let mut cfg = ToleranceConfig::default();
        if let Some(t) = self.tol_rank {
            cfg.rank_rel_tol = t;
        }
        match self.tol_residual {
            Some(t) => cfg.residual_tol = t,
            None => {
                if let Ok(v) = std::env::var("SDC_DEFAULT_TOL") {
                    cfg.residual_tol = v
                        .parse::<f64>()
                        .map_err(|_| format!("SDC_DEFAULT_TOL is not a number: {v:?}"))?;
                }
            }
        }
        if let Some(s) = self.seed {
            cfg.rng_seed = s;
        }
        if let Some(s) = self.samples {
            cfg.max_rank_samples = s;
        }
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the matrices in a matrix-set file are SDC
    Decide {
        /// Path to a matrix-set file
        input: PathBuf,
        /// On SDC, write the transform and diagonals to this path
        #[arg(long = "emit-transform")]
        emit_transform: Option<PathBuf>,
        /// Machine-readable report
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Decide and write the transform (shorthand for decide --emit-transform)
    Transform {
        input: PathBuf,
        /// Output path for the transform file
        #[arg(long, short)]
        output: PathBuf,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Generate a seeded synthetic family with a known verdict
    Synth {
        /// Output path for the matrix-set file
        output: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// One of: sdc, noncommuting, defective
        #[arg(long, default_value = "sdc")]
        kind: String,
        /// Ground-truth sidecar path (default: <output>.truth.json)
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Decide whether a commutative algebra given by its structure tensor
    /// is an evolution algebra
    Evolution {
        /// Path to a structure-tensor file
        input: PathBuf,
        #[arg(long = "emit-transform")]
        emit_transform: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:+.6e}{:+.6e}i", z.re, z.im)
}

fn pair(z: Complex64) -> serde_json::Value {
    json!([z.re, z.im])
}

fn report(cert: &SdcCertificate, n: usize, m: usize, as_json: bool) {
    if as_json {
        let (verdict, reason, detail) = match &cert.verdict {
            SdcVerdict::Sdc { .. } => ("sdc", serde_json::Value::Null, serde_json::Value::Null),
            SdcVerdict::NotSdc(r) => {
                use sdc_core::NotSdcReason::*;
                let detail = match r {
                    KernelDeficit { dim, expected } => json!({"dim": dim, "expected": expected}),
                    NonCommuting { j, k } => json!({"j": j, "k": k}),
                    Defective { j } => json!({"j": j}),
                };
                ("not-sdc", json!(r.label()), detail)
            }
        };
        let out = json!({
            "verdict": verdict,
            "reason": reason,
            "detail": detail,
            "n": n,
            "m": m,
            "r": cert.witness.r,
            "lambda0": cert.witness.lambda0.iter().map(|&z| pair(z)).collect::<Vec<_>>(),
            "residual": cert.residual,
            "marginal": cert.marginal,
            "diagnostics": {
                "off_block_max": cert.diagnostics.off_block_max,
                "witness_sv_gap": cert.diagnostics.witness_sv_gap,
                "kernel_dim": cert.diagnostics.kernel_dim,
                "condition_p": cert.diagnostics.condition_p,
            },
        });
        println!("{out}");
        return;
    }

    match &cert.verdict {
        SdcVerdict::Sdc { .. } => println!("verdict: SDC"),
        SdcVerdict::NotSdc(r) => {
            use sdc_core::NotSdcReason::*;
            println!("verdict: not SDC");
            match r {
                KernelDeficit { dim, expected } => {
                    println!("reason: kernel-deficit (dim {dim} < {expected})")
                }
                NonCommuting { j, k } => {
                    println!("reason: non-commuting (members {j} and {k})")
                }
                Defective { j } => println!("reason: defective (member {j})"),
            }
        }
    }
    println!("r: {}", cert.witness.r);
    let lambda: Vec<String> = cert.witness.lambda0.iter().map(|&z| fmt_complex(z)).collect();
    println!("lambda0: [{}]", lambda.join(", "));
    println!("residual: {:.3e}", cert.residual);
    if cert.marginal {
        println!("note: residual within a factor 10 of the acceptance threshold");
    }
}

fn emit(cert: &SdcCertificate, n: usize, m: usize, path: &PathBuf) -> Result<(), String> {
    if let SdcVerdict::Sdc { p, diagonals } = &cert.verdict {
        let t = TransformFile {
            n,
            m,
            p: p.clone(),
            diagonals: diagonals.iter().map(|d| d.to_vec()).collect(),
        };
        t.to_path(path).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn decide_family(
    matrices: Vec<sdc_core::CMat>,
    cfg: &ToleranceConfig,
    emit_transform: Option<&PathBuf>,
    as_json: bool,
) -> Result<ExitCode, String> {
    let n = matrices[0].nrows();
    let m = matrices.len();
    let pencil = LinearPencil::new(matrices, cfg).map_err(|e| e.to_string())?;
    let cert = decide_sdc(&pencil, cfg).map_err(|e| e.to_string())?;
    if let Some(path) = emit_transform {
        emit(&cert, n, m, path)?;
    }
    report(&cert, n, m, as_json);
    Ok(if cert.is_sdc() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Decide { input, emit_transform, json, tol } => {
            let cfg = tol.to_config()?;
            let set = MatrixSetFile::from_path(&input, &cfg)
                .map_err(|e| format!("{}: {e}", input.display()))?;
            decide_family(set.matrices, &cfg, emit_transform.as_ref(), json)
        }
        Command::Transform { input, output, json, tol } => {
            let cfg = tol.to_config()?;
            let set = MatrixSetFile::from_path(&input, &cfg)
                .map_err(|e| format!("{}: {e}", input.display()))?;
            decide_family(set.matrices, &cfg, Some(&output), json)
        }
        Command::Synth { output, n, m, r, seed, kind, sidecar } => {
            let kind = SynthKind::parse(&kind)
                .ok_or_else(|| format!("unknown kind {kind:?}; use sdc, noncommuting, or defective"))?;
            let inst = synthesize(n, m, r, seed, kind).map_err(|e| e.to_string())?;
            let mut set = MatrixSetFile::from_matrices(
                Some(format!("synth-{}-n{n}-m{m}-r{r}-seed{seed}", kind.label())),
                inst.matrices,
            )
            .map_err(|e| e.to_string())?;
            set.metadata = Some(json!({"seed": seed, "kind": kind.label(), "r": r}));
            set.to_path(&output).map_err(|e| e.to_string())?;
            let sidecar_path = sidecar.unwrap_or_else(|| {
                let mut s = output.as_os_str().to_owned();
                s.push(".truth.json");
                PathBuf::from(s)
            });
            std::fs::write(
                &sidecar_path,
                write_ground_truth(&inst.ground_truth).map_err(|e| e.to_string())?,
            )
            .map_err(|e| e.to_string())?;
            println!("wrote {} and {}", output.display(), sidecar_path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Evolution { input, emit_transform, json, tol } => {
            let cfg = tol.to_config()?;
            let tensor = StructureTensorFile::from_path(&input)
                .map_err(|e| format!("{}: {e}", input.display()))?;
            let matrices = sdc_core::evolution::structure_matrices(&tensor);
            decide_family(matrices, &cfg, emit_transform.as_ref(), json)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
