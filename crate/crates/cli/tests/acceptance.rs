//! Acceptance suite: the release gate for the whole workspace.
//!
//! Each test covers one criterion and prints a single `criterion N ...:
//! pass` line on success (visible with `--nocapture`); a failure panics
//! with the offending cases.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sdc_core::linalg::{eig, takagi};
use sdc_core::matrix::{
    identity, is_unitary, max_abs, symmetrize, transpose, CMat,
};
use sdc_core::sdc::SdcVerdict;
use sdc_core::sds::build_reduced_family;
use sdc_core::{
    decide_sdc, reduce, synthesize, verify_certificate, LinearPencil, NotSdcReason, ReduceOutcome,
    SynthKind, ToleranceConfig,
};

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn pass(n: usize, what: &str) {
    println!("criterion {n} ({what}): pass");
}

fn real2(rows: &[[f64; 2]; 2]) -> CMat {
    let mut m = CMat::zeros((2, 2));
    for i in 0..2 {
        for j in 0..2 {
            m[[i, j]] = Complex64::new(rows[i][j], 0.0);
        }
    }
    m
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let mut m = Array2::from_elem((n, n), Complex64::default());
    for i in 0..n {
        for j in 0..n {
            m[[i, j]] = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        }
    }
    symmetrize(&m)
}

/// Criterion 1: the 2x2 full-rank golden pair.
#[test]
fn criterion_1_golden_full_rank_pair() {
    let start = Instant::now();
    let a1 = real2(&[[0.0, 1.0], [1.0, 1.0]]);
    let a2 = real2(&[[1.0, 1.0], [1.0, 0.0]]);
    let pencil = LinearPencil::new(vec![a1.clone(), a2.clone()], &cfg()).unwrap();

    // reduced second matrix has eigenvalues (1 +- i sqrt(3)) / 2
    let w = pencil.max_rank_point(&cfg()).unwrap();
    let rr = match reduce(&pencil, &w, &cfg()).unwrap() {
        ReduceOutcome::Reduced(rr) => rr,
        other => panic!("expected reduction, got {other:?}"),
    };
    let fam = build_reduced_family(&rr, &w, &cfg()).unwrap();
    let e = eig(&fam.matrices()[1], &cfg()).unwrap();
    let s3 = 3.0f64.sqrt() / 2.0;
    let d_plus = Complex64::new(0.5, s3);
    let d_minus = Complex64::new(0.5, -s3);
    let mut vals = e.values.to_vec();
    vals.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
    assert!((vals[0] - d_minus).norm() <= 1e-12, "eigenvalue {:?}", vals[0]);
    assert!((vals[1] - d_plus).norm() <= 1e-12, "eigenvalue {:?}", vals[1]);

    let cert = decide_sdc(&pencil, &cfg()).unwrap();
    let (p, _) = match &cert.verdict {
        SdcVerdict::Sdc { p, diagonals } => (p.clone(), diagonals.clone()),
        SdcVerdict::NotSdc(r) => panic!("expected SDC, got {r:?}"),
    };

    let g1 = transpose(&p).dot(&a1).dot(&p);
    let g2 = transpose(&p).dot(&a2).dot(&p);
    for g in [&g1, &g2] {
        for i in 0..2 {
            for j in 0..2 {
                if i != j {
                    assert!(g[[i, j]].norm() <= 1e-10, "off-diagonal {:?}", g[[i, j]]);
                }
            }
        }
    }
    // scaling-invariant ratio check, order-insensitive in the columns
    let r0 = g2[[0, 0]] / g1[[0, 0]];
    let r1 = g2[[1, 1]] / g1[[1, 1]];
    let direct = (r0 - d_plus).norm() <= 1e-10 && (r1 - d_minus).norm() <= 1e-10;
    let swapped = (r0 - d_minus).norm() <= 1e-10 && (r1 - d_plus).norm() <= 1e-10;
    assert!(direct || swapped, "ratios {r0:?}, {r1:?}");

    assert!(start.elapsed().as_secs_f64() < 1.0);
    pass(1, "full-rank golden pair");
}

/// Criterion 2: the 3x3 kernel-deficit golden pair.
#[test]
fn criterion_2_golden_kernel_deficit() {
    let start = Instant::now();
    let mut a1 = CMat::zeros((3, 3));
    a1[[0, 0]] = Complex64::new(1.0, 0.0);
    a1[[0, 1]] = Complex64::new(1.0, 0.0);
    a1[[1, 0]] = Complex64::new(1.0, 0.0);
    let mut a2 = CMat::zeros((3, 3));
    a2[[0, 2]] = Complex64::new(1.0, 0.0);
    a2[[2, 0]] = Complex64::new(1.0, 0.0);
    let pencil = LinearPencil::new(vec![a1, a2], &cfg()).unwrap();
    let cert = decide_sdc(&pencil, &cfg()).unwrap();
    match &cert.verdict {
        SdcVerdict::NotSdc(NotSdcReason::KernelDeficit { dim, expected }) => {
            assert_eq!(*dim, 0);
            assert_eq!(*expected, 1);
        }
        other => panic!("expected kernel deficit, got {other:?}"),
    }
    assert_eq!(cert.witness.r, 2);
    assert!(start.elapsed().as_secs_f64() < 1.0);
    pass(2, "kernel-deficit golden pair");
}

/// 200 (n, m, r, seed) shapes covering n <= 8, m <= 5, and every r in 1..=n.
fn sdc_shapes() -> Vec<(usize, usize, usize, u64)> {
    let mut shapes = Vec::new();
    let mut seed = 0u64;
    'outer: loop {
        for n in 2..=8usize {
            for r in 1..=n {
                let m = 1 + ((n + r + seed as usize) % 5);
                shapes.push((n, m, r, seed));
                seed += 1;
                if shapes.len() == 200 {
                    break 'outer;
                }
            }
        }
    }
    shapes
}

/// Criterion 3: 200 seeded synthetic SDC families all decided SDC.
#[test]
fn criterion_3_synthetic_sdc_round_trip() {
    let start = Instant::now();
    let mut fails = Vec::new();
    for (n, m, r, seed) in sdc_shapes() {
        let inst = synthesize(n, m, r, seed, SynthKind::Sdc).unwrap();
        let pencil = LinearPencil::new(inst.matrices, &cfg()).unwrap();
        let cert = decide_sdc(&pencil, &cfg()).unwrap();
        if !cert.is_sdc() || cert.residual > 1e-8 {
            fails.push(format!(
                "n={n} m={m} r={r} seed={seed}: sdc={} residual={:.3e}",
                cert.is_sdc(),
                cert.residual
            ));
        }
    }
    assert!(fails.is_empty(), "{} failures:\n{}", fails.len(), fails.join("\n"));
    assert!(start.elapsed().as_secs_f64() < 30.0);
    pass(3, "200 synthetic SDC families");
}

/// Criterion 4: 100 noncommuting + 50 defective families refuted with the
/// matching reason.
#[test]
fn criterion_4_synthetic_rejections() {
    let start = Instant::now();
    let mut fails = Vec::new();

    for seed in 0..100u64 {
        let n = 3 + (seed as usize % 6); // 3..=8
        let r = 2 + (seed as usize % (n - 1)); // 2..=n
        let m = 3 + (seed as usize % 3); // 3..=5
        let inst = synthesize(n, m, r, seed, SynthKind::Noncommuting).unwrap();
        let pencil = LinearPencil::new(inst.matrices, &cfg()).unwrap();
        let cert = decide_sdc(&pencil, &cfg()).unwrap();
        if !matches!(cert.verdict, SdcVerdict::NotSdc(NotSdcReason::NonCommuting { .. })) {
            fails.push(format!("noncommuting n={n} m={m} r={r} seed={seed}: {:?}", cert.verdict));
        }
    }

    for seed in 0..50u64 {
        let n = 2 + (seed as usize % 7); // 2..=8
        let r = 2 + (seed as usize % (n - 1)).min(n - 2); // 2..=n
        let m = 2 + (seed as usize % 4); // 2..=5
        let inst = synthesize(n, m, r, seed, SynthKind::Defective).unwrap();
        let pencil = LinearPencil::new(inst.matrices, &cfg()).unwrap();
        let cert = decide_sdc(&pencil, &cfg()).unwrap();
        if !matches!(cert.verdict, SdcVerdict::NotSdc(NotSdcReason::Defective { .. })) {
            fails.push(format!("defective n={n} m={m} r={r} seed={seed}: {:?}", cert.verdict));
        }
    }

    assert!(fails.is_empty(), "{} failures:\n{}", fails.len(), fails.join("\n"));
    assert!(start.elapsed().as_secs_f64() < 30.0);
    pass(4, "150 synthetic refutations");
}

/// Criterion 5: different search seeds give identical verdicts, and on SDC
/// both transforms verify.
#[test]
fn criterion_5_witness_independence() {
    let mut families: Vec<(String, Vec<CMat>)> = vec![
        (
            "golden-pair".into(),
            vec![real2(&[[0.0, 1.0], [1.0, 1.0]]), real2(&[[1.0, 1.0], [1.0, 0.0]])],
        ),
    ];
    for (kind, seeds) in [
        (SynthKind::Sdc, vec![0u64, 1, 2, 3, 4, 5]),
        (SynthKind::Noncommuting, vec![0, 1, 2]),
        (SynthKind::Defective, vec![0, 1, 2]),
    ] {
        for seed in seeds {
            let n = 3 + (seed as usize % 5);
            let r = 2 + (seed as usize % (n - 1));
            let m = if kind == SynthKind::Noncommuting { 3 } else { 2 + (seed as usize % 2) };
            let inst = synthesize(n, m, r, seed, kind).unwrap();
            families.push((format!("{}-{seed}", kind.label()), inst.matrices));
        }
    }

    let mut fails = Vec::new();
    for (name, mats) in families {
        let c1 = cfg().with_seed(17);
        let c2 = cfg().with_seed(9001);
        let p1 = LinearPencil::new(mats.clone(), &c1).unwrap();
        let p2 = LinearPencil::new(mats, &c2).unwrap();
        let cert1 = decide_sdc(&p1, &c1).unwrap();
        let cert2 = decide_sdc(&p2, &c2).unwrap();
        let label = |c: &sdc_core::sdc::SdcCertificate| match &c.verdict {
            SdcVerdict::Sdc { .. } => "sdc".to_string(),
            SdcVerdict::NotSdc(r) => r.label().to_string(),
        };
        if label(&cert1) != label(&cert2) {
            fails.push(format!("{name}: {} vs {}", label(&cert1), label(&cert2)));
            continue;
        }
        for (cert, pencil) in [(&cert1, &p1), (&cert2, &p2)] {
            if let SdcVerdict::Sdc { p, .. } = &cert.verdict {
                let report = verify_certificate(pencil, p, &cfg()).unwrap();
                if !report.pass {
                    fails.push(format!("{name}: verification residual {:.3e}", report.residual));
                }
            }
        }
    }
    assert!(fails.is_empty(), "{}", fails.join("\n"));
    pass(5, "witness independence across seeds");
}

/// Criterion 6: symmetric-factorization micro-suite at 1e-10.
#[test]
fn criterion_6_takagi_micro_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut fails = Vec::new();
    for case in 0..100 {
        let n = 1 + rng.gen_range(0..10);
        let c = random_symmetric(&mut rng, n);
        let scale = max_abs(&c).max(1.0);
        let (v, d) = takagi(&c, &cfg()).unwrap();
        if !is_unitary(&v, 1e-10) {
            fails.push(format!("case {case}: V not unitary"));
            continue;
        }
        let mut diag = CMat::zeros((n, n));
        for i in 0..n {
            diag[[i, i]] = Complex64::new(d[i], 0.0);
        }
        let res = max_abs(&(transpose(&v).dot(&c).dot(&v) - diag));
        if res > 1e-10 * scale {
            fails.push(format!("case {case}: residual {res:.3e}"));
        }
        // diagonal equals the singular values (both sorted descending)
        let mut sv = sdc_core::linalg::singular_values(&c).unwrap().to_vec();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (x, y) in d.iter().zip(&sv) {
            if (x - y).abs() > 1e-10 * scale {
                fails.push(format!("case {case}: diagonal {x} vs sigma {y}"));
                break;
            }
        }
    }
    assert!(fails.is_empty(), "{}", fails.join("\n"));
    pass(6, "100-case symmetric factorization suite");
}

/// Criterion 7: kernel dimension never exceeds n - r.
#[test]
fn criterion_7_kernel_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut fails = Vec::new();
    for case in 0..200 {
        let n = 2 + rng.gen_range(0..7);
        let m = 1 + rng.gen_range(0..4);
        let mats: Vec<CMat> = (0..m).map(|_| random_symmetric(&mut rng, n)).collect();
        let pencil = LinearPencil::new(mats, &cfg()).unwrap();
        let w = pencil.max_rank_point(&cfg()).unwrap();
        let kernel = sdc_core::reduction::kernel_intersection(&pencil, &cfg()).unwrap();
        if kernel.ncols() > n - w.r {
            fails.push(format!("case {case}: dim {} > {} - {}", kernel.ncols(), n, w.r));
        }
    }
    assert!(fails.is_empty(), "{}", fails.join("\n"));
    pass(7, "kernel bound on 200 random families");
}

/// Criterion 8: the algebra front-end through the real binary.
#[test]
fn criterion_8_evolution_cli() {
    let data = |name: &str| -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
    };
    let run = |input: &Path| {
        Command::new(env!("CARGO_BIN_EXE_sdc"))
            .arg("evolution")
            .arg(input)
            .env_remove("SDC_DEFAULT_TOL")
            .output()
            .unwrap()
    };

    let out = run(&data("tensor-diagonal.json"));
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    // identity is an admissible transform for the diagonal tensor
    let tensor = sdc_core::formats::StructureTensorFile::from_path(&data("tensor-diagonal.json")).unwrap();
    let mats = sdc_core::evolution::structure_matrices(&tensor);
    let n = mats[0].nrows();
    let pencil = LinearPencil::new(mats, &cfg()).unwrap();
    let report = verify_certificate(&pencil, &identity(n), &cfg()).unwrap();
    assert!(report.pass, "identity residual {:.3e}", report.residual);

    let out = run(&data("tensor-embedded-deficit.json"));
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    pass(8, "evolution CLI golden tensors");
}
