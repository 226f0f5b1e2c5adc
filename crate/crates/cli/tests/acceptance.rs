//! Acceptance suite: every criterion the artifact must meet, at its stated
//! tolerance, with one PASS line per criterion (visible with --nocapture).

use std::process::Command;
use std::time::Instant;

use duality_cli::check::{run_check, CheckConfig};
use duality_cli::example::{run_example, ExampleName};
use duality_cli::output::Cell;
use duality_cli::parallel::{parallel_map, worker_count};
use duality_core::discrimination::discriminate;
use duality_core::discrimination::Ensemble;
use duality_core::relations::{
    eval_cor1, eval_cor2, eval_relation, InputState, PdMode, RelationId,
};
use duality_core::sampling::{detectors_haar, detectors_two_fixed_overlap, mixed_random_rank};
use duality_core::states::{random_pure_with, rng_stream};
use rand::Rng;

fn float(cell: &Cell) -> f64 {
    match cell {
        Cell::Float(x) => *x,
        Cell::Str(s) => s.parse().expect("numeric cell"),
        other => panic!("expected float cell, got {other:?}"),
    }
}

fn col(columns: &[String], name: &str) -> usize {
    columns
        .iter()
        .position(|c| c == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn criterion_01_cor1_identity_at_scale() {
    let trials = 10_000usize;
    let start = Instant::now();
    let worst = parallel_map(trials, worker_count(), |t| {
        let mut rng = rng_stream(101, t as u64);
        let rho = mixed_random_rank(2, 2, &mut rng).unwrap();
        let det = detectors_haar(2, &mut rng);
        let r = eval_cor1(&InputState::mixed(rho), &det).unwrap();
        r.residual.abs()
    })
    .into_iter()
    .fold(0.0f64, f64::max);
    let elapsed = start.elapsed().as_secs_f64();
    assert!(worst < 1e-9, "max |residual| = {worst}");
    assert!(elapsed < 10.0, "runtime {elapsed}s exceeds 10s");
    println!(
        "ACCEPTANCE 01 cor1_identity: PASS (max |residual| = {worst:.3e}, runtime = {elapsed:.2}s)"
    );
}

#[test]
fn criterion_02_cor2_identity_at_scale() {
    let trials = 10_000usize;
    let worst = parallel_map(trials, worker_count(), |t| {
        let mut rng = rng_stream(202, t as u64);
        let rho = mixed_random_rank(2, 2, &mut rng).unwrap();
        let det = detectors_two_fixed_overlap(0.5, &mut rng).unwrap();
        let r = eval_cor2(&InputState::mixed(rho), &det).unwrap();
        assert!((r.rhs - 0.25).abs() < 1e-15);
        (r.lhs - 0.25).abs()
    })
    .into_iter()
    .fold(0.0f64, f64::max);
    assert!(worst < 1e-9, "max |LHS - 1/4| = {worst}");
    println!("ACCEPTANCE 02 cor2_identity: PASS (max |LHS - 1/4| = {worst:.3e})");
}

/// Monte Carlo sweep of an inequality over n ∈ {2..5}, m ∈ {1..4}.
/// Returns (violations, most negative residual seen).
fn inequality_sweep(
    relation: RelationId,
    trials_per_combo: usize,
    mode: PdMode,
    seed_base: u64,
) -> (u64, f64) {
    let mut violations = 0u64;
    let mut min_residual = f64::INFINITY;
    for n in 2..=5usize {
        for m in 1..=4usize {
            let seed = seed_base + (n * 10 + m) as u64;
            let residuals = parallel_map(trials_per_combo, worker_count(), |t| {
                let mut rng = rng_stream(seed, t as u64);
                let rho = mixed_random_rank(n, m, &mut rng).unwrap();
                let det = detectors_haar(n, &mut rng);
                let r = eval_relation(relation, &InputState::mixed(rho), &det, mode).unwrap();
                (r.satisfied, r.residual)
            });
            for (ok, residual) in residuals {
                if !ok {
                    violations += 1;
                }
                min_residual = min_residual.min(residual);
            }
        }
    }
    (violations, min_residual)
}

#[test]
fn criterion_03_th1_inequality_sweep() {
    let (violations, min_residual) =
        inequality_sweep(RelationId::Th1Duality, 10_000, PdMode::UpperBound, 303);
    assert_eq!(violations, 0, "min residual {min_residual}");
    assert!(min_residual >= -1e-9);
    let (oracle_violations, oracle_min) =
        inequality_sweep(RelationId::Th1Duality, 1_000, PdMode::Optimized, 313);
    assert_eq!(oracle_violations, 0, "oracle min residual {oracle_min}");
    println!(
        "ACCEPTANCE 03 th1_inequality: PASS (bound min residual = {min_residual:.3e}, oracle min residual = {oracle_min:.3e})"
    );
}

#[test]
fn criterion_04_th2_inequality_sweep() {
    let (violations, min_residual) =
        inequality_sweep(RelationId::Th2Mixedness, 10_000, PdMode::UpperBound, 404);
    assert_eq!(violations, 0, "min residual {min_residual}");
    assert!(min_residual >= -1e-9);
    println!("ACCEPTANCE 04 th2_inequality: PASS (min residual = {min_residual:.3e})");
}

#[test]
fn criterion_05_th3_pure_and_two_qubit_mixed() {
    let mut min_residual = f64::INFINITY;
    let mut violations = 0u64;
    for n in 2..=5usize {
        let results = parallel_map(10_000, worker_count(), |t| {
            let mut rng = rng_stream(505 + n as u64, t as u64);
            let m = 1 + t % 4;
            let psi = random_pure_with(n, m, &mut rng).unwrap();
            let det = detectors_haar(n, &mut rng);
            let r = eval_relation(
                RelationId::Th3Entanglement,
                &InputState::pure(psi),
                &det,
                PdMode::UpperBound,
            )
            .unwrap();
            (r.satisfied, r.residual)
        });
        for (ok, residual) in results {
            if !ok {
                violations += 1;
            }
            min_residual = min_residual.min(residual);
        }
    }
    let results = parallel_map(10_000, worker_count(), |t| {
        let mut rng = rng_stream(555, t as u64);
        let rho = mixed_random_rank(2, 2, &mut rng).unwrap();
        let det = detectors_haar(2, &mut rng);
        let r = eval_relation(
            RelationId::Th3Entanglement,
            &InputState::mixed(rho),
            &det,
            PdMode::UpperBound,
        )
        .unwrap();
        (r.satisfied, r.residual)
    });
    for (ok, residual) in results {
        if !ok {
            violations += 1;
        }
        min_residual = min_residual.min(residual);
    }
    assert_eq!(violations, 0, "min residual {min_residual}");
    assert!(min_residual >= -1e-9);
    println!("ACCEPTANCE 05 th3_pure_and_mixed: PASS (min residual = {min_residual:.3e})");
}

#[test]
fn criterion_06_example1_reproduction() {
    let out = run_example(ExampleName::Example1, None).unwrap();
    assert_eq!(out.table.rows.len(), 51 * 51 * 5);
    assert!(
        out.max_disagreement < 1e-9,
        "closed-form disagreement {}",
        out.max_disagreement
    );
    // at c_u = 0 the two sides coincide
    let cols = &out.table.columns;
    let (cu, pl, pr) = (
        col(cols, "c_u"),
        col(cols, "pipeline_lhs"),
        col(cols, "pipeline_rhs"),
    );
    let mut worst_gap = 0.0f64;
    for row in &out.table.rows {
        if float(&row[cu]) == 0.0 {
            worst_gap = worst_gap.max((float(&row[pl]) - float(&row[pr])).abs());
        }
    }
    assert!(worst_gap < 1e-9, "lhs-rhs gap at c_u=0: {worst_gap}");
    println!(
        "ACCEPTANCE 06 example1_reproduction: PASS (max closed-form error = {:.3e}, max gap at c_u=0 = {worst_gap:.3e})",
        out.max_disagreement
    );
}

#[test]
fn criterion_07_werner_reproduction() {
    let out = run_example(ExampleName::Werner, None).unwrap();
    assert_eq!(out.table.rows.len(), 101 * 101);
    let cols = &out.table.columns;
    let (p_idx, le, re_, pl, pr) = (
        col(cols, "p"),
        col(cols, "lhs_error"),
        col(cols, "rhs_error"),
        col(cols, "pipeline_lhs"),
        col(cols, "pipeline_rhs"),
    );
    let mut worst_entangled = 0.0f64;
    let mut worst_p1_gap = 0.0f64;
    for row in &out.table.rows {
        let p = float(&row[p_idx]);
        if p >= 1.0 / 3.0 {
            worst_entangled = worst_entangled.max(float(&row[le])).max(float(&row[re_]));
        }
        if p == 1.0 {
            worst_p1_gap = worst_p1_gap.max((float(&row[pl]) - float(&row[pr])).abs());
        }
    }
    assert!(
        worst_entangled < 1e-9,
        "closed-form error {worst_entangled}"
    );
    assert!(worst_p1_gap < 1e-10, "lhs-rhs gap at p=1: {worst_p1_gap}");
    println!(
        "ACCEPTANCE 07 werner_reproduction: PASS (max closed-form error = {worst_entangled:.3e}, max gap at p=1 = {worst_p1_gap:.3e})"
    );
}

#[test]
fn criterion_08_threepath_comparison() {
    let out = run_example(ExampleName::Threepath, None).unwrap();
    assert_eq!(out.table.rows.len(), 21 * 21);
    let cols = &out.table.columns;
    let (v2e, x2e, t_lhs, e_lhs) = (
        col(cols, "v2_error"),
        col(cols, "x2_error"),
        col(cols, "th1_lhs"),
        col(cols, "eq2_lhs"),
    );
    let mut worst = 0.0f64;
    for row in &out.table.rows {
        worst = worst.max(float(&row[v2e])).max(float(&row[x2e]));
        assert!(
            float(&row[t_lhs]) + 1e-15 >= float(&row[e_lhs]),
            "l2-form lhs must dominate the l1 form on this family"
        );
    }
    assert!(worst < 1e-12, "closed-form error {worst}");
    println!("ACCEPTANCE 08 threepath_comparison: PASS (max closed-form error = {worst:.3e})");
}

#[test]
fn criterion_09_discrimination_sandwich() {
    let mut worst_gap = 0.0f64;
    for n in 2..=5usize {
        let results = parallel_map(1_000, worker_count(), |t| {
            let mut rng = rng_stream(909 + n as u64, t as u64);
            let det = detectors_haar(n, &mut rng);
            let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0f64..1.0)).collect();
            let total: f64 = q.iter().sum();
            q.iter_mut().for_each(|x| *x /= total);
            let e = Ensemble::new(q, det).unwrap();
            let r = discriminate(&e).unwrap();
            assert!(
                r.ps_pgm <= r.ps_opt + 1e-8 && r.ps_opt <= r.ps_upper + 1e-8,
                "sandwich violated at n={n} trial {t}: {r:?}"
            );
            match r.ps_exact {
                Some(exact) => (r.ps_opt - exact).abs(),
                None => 0.0,
            }
        });
        if n == 2 {
            for gap in results {
                assert!(gap < 1e-6, "optimizer vs Helstrom gap {gap}");
                worst_gap = worst_gap.max(gap);
            }
        }
    }
    println!(
        "ACCEPTANCE 09 discrimination_sandwich: PASS (worst optimizer-vs-Helstrom gap at n=2 = {worst_gap:.3e})"
    );
}

#[test]
fn criterion_10_check_determinism() {
    // byte-identical artifacts from repeated identical invocations, through
    // the real binary
    let exe = env!("CARGO_BIN_EXE_duality-lab");
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    for format in ["csv", "json"] {
        let out_a = dir.join(format!("det_a.{format}"));
        let out_b = dir.join(format!("det_b.{format}"));
        for out in [&out_a, &out_b] {
            let status = Command::new(exe)
                .args([
                    "check",
                    "--relation",
                    "th1,cor1",
                    "--n",
                    "2",
                    "--memory-dim",
                    "3",
                    "--trials",
                    "200",
                    "--seed",
                    "42",
                    "--format",
                    format,
                    "--output",
                ])
                .arg(out)
                .status()
                .expect("binary runs");
            assert!(status.success(), "check exited with {status}");
        }
        let a = std::fs::read(&out_a).unwrap();
        let b = std::fs::read(&out_b).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{format} artifacts differ between identical runs");
    }
    // the library path is deterministic as well, regardless of thread count
    let cfg = |threads| CheckConfig {
        relations: vec![RelationId::Th2Mixedness],
        n: 3,
        memory_dim: 2,
        trials: 100,
        seed: 9,
        pure: false,
        oracle: false,
        rank: None,
        threads,
    };
    let one = run_check(&cfg(1)).unwrap();
    let many = run_check(&cfg(8)).unwrap();
    let render = |t: &duality_cli::output::Table| {
        let mut buf = Vec::new();
        t.write(duality_cli::output::Format::Csv, &mut buf).unwrap();
        buf
    };
    assert_eq!(render(&one.table), render(&many.table));
    println!(
        "ACCEPTANCE 10 check_determinism: PASS (byte-identical csv/json, thread-count independent)"
    );
}
