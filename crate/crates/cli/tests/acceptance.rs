//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Lines go straight to the stderr handle so they show up even when the
//! test harness captures output.

use std::fs;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use aluthge_core::generators::{ginibre, trial_rng};
use aluthge_core::harness::run_trials;
use aluthge_core::maps::{MapSpec, PairSource};
use aluthge_core::{
    adjoint_counterexample, basis_vector, iterate_aluthge, normal_residual, CMatrix, CheckConfig, CheckId, CheckReport,
    Expectation, MapKind, Tolerances, C64,
};
use tempfile::TempDir;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn emit(line: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{line}");
}

fn run(id: CheckId, dim: usize, lambda: f64, trials: usize) -> CheckReport {
    id.run(&CheckConfig::new(dim, 7, lambda, trials)).expect("check runs")
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn no_failures(r: &CheckReport) -> Result<(), String> {
    require(r.failures == 0, || {
        format!(
            "{} d={} lambda={}: {} failures, witness {:?}",
            r.check_id,
            r.dim,
            r.lambda,
            r.failures,
            r.witness.as_ref().map(|w| (&w.note, w.trial))
        )
    })
}

fn rank_one_formula() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for dim in 2..=8 {
        for lambda in [0.25, 0.5, 0.75] {
            let r = run(CheckId::RankOneFormula, dim, lambda, 1000);
            no_failures(&r)?;
            worst = worst.max(r.worst_residual);
        }
    }
    let elapsed = start.elapsed();
    require(worst <= 1e-9, || format!("worst residual {worst:e}"))?;
    require(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "21 x 1000 trials, worst residual {worst:.2e}, {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn kernel() -> Outcome {
    let mut min_ref = f64::INFINITY;
    let mut worst: f64 = 0.0;
    for dim in 2..=6 {
        for lambda in [0.25, 0.5, 0.75, 1.0] {
            let r = run(CheckId::NilpotentKernel, dim, lambda, 1000);
            no_failures(&r)?;
            worst = worst.max(r.worst_residual);
            min_ref = min_ref.min(r.min_refutation.expect("refutations recorded"));
        }
    }
    require(worst <= 1e-9, || format!("square-zero residual {worst:e}"))?;
    require(min_ref > 1e-5, || {
        format!("smallest ||Δ(T)|| with ||T^2|| > 1e-3 is {min_ref:e}")
    })?;
    Ok(format!(
        "worst square-zero residual {worst:.2e}, smallest refutation {min_ref:.2e}"
    ))
}

fn spectrum() -> Outcome {
    let mut worst: f64 = 0.0;
    for lambda in [0.25, 0.5, 0.75, 0.0, 1.0] {
        let r = run(CheckId::SpectrumInvariance, 6, lambda, 1000);
        no_failures(&r)?;
        worst = worst.max(r.worst_residual);
    }
    require(worst <= 1e-7, || format!("pairing distance {worst:e}"))?;
    Ok(format!("6x6, 5 values of lambda, worst pairing distance {worst:.2e}"))
}

fn fixed_points() -> Outcome {
    let mut min_ref = f64::INFINITY;
    let mut worst: f64 = 0.0;
    for dim in 2..=6 {
        let r = run(CheckId::FixedPoints, dim, 0.5, 500);
        no_failures(&r)?;
        worst = worst.max(r.worst_residual);
        min_ref = min_ref.min(r.min_refutation.expect("refutations recorded"));
    }
    require(worst <= 1e-8, || format!("normal residual {worst:e}"))?;
    require(min_ref > 1e-4, || {
        format!("smallest non-normal displacement {min_ref:e}")
    })?;
    Ok(format!(
        "worst normal residual {worst:.2e}, smallest non-normal displacement {min_ref:.2e}"
    ))
}

fn jordan_conditions() -> Outcome {
    let mut worst: f64 = 0.0;
    for dim in 3..=6 {
        for id in [CheckId::JordanCondition, CheckId::StarJordanCondition] {
            let r = run(id, dim, 0.5, 1000);
            no_failures(&r)?;
            require(r.vacuous == 0, || format!("{id} d={dim}: {} vacuous trials", r.vacuous))?;
            worst = worst.max(r.worst_residual);
        }
    }
    require(worst <= 1e-8, || format!("residual {worst:e}"))?;
    Ok(format!("dims 3-6 x 1000 trials, worst residual {worst:.2e}"))
}

/// Largest |eigenvalue| of a real symmetric 2x2 block `[[a, b], [b, d]]`.
fn symmetric_2x2_norm(a: f64, b: f64, d: f64) -> f64 {
    let mid = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    (mid + rad).abs().max((mid - rad).abs())
}

fn competitor() -> Outcome {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // x' ⊗ x' - x ⊗ x lives in the e1, e2 block: [[-1/2, 1/2], [1/2, 1/2]].
    let oracle = h * symmetric_2x2_norm(h * h - 1.0, h * h, h * h);
    require((oracle - 0.5).abs() < 1e-15, || format!("oracle {oracle}"))?;
    let tol = Tolerances::default();
    let mut min_sampled = f64::INFINITY;
    for dim in 2..=5 {
        let x: Vec<C64> = basis_vector(dim, 0);
        let xp: Vec<C64> = (0..dim).map(|i| C64::new(if i < 2 { h } else { 0.0 }, 0.0)).collect();
        for lambda in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let ce = adjoint_counterexample(lambda, &x, &xp, &tol).map_err(|e| e.to_string())?;
            require((ce.residual - oracle).abs() <= 1e-10, || {
                format!("d={dim} lambda={lambda}: residual {}", ce.residual)
            })?;
        }
        let cfg = CheckConfig::new(dim, 7, 0.5, 1000);
        let a = ce_matrix(&x, &xp);
        let body = aluthge_core::maps::jordan_condition(
            MapSpec::random(MapKind::AdjointConj),
            PairSource::Fixed(a, CMatrix::identity(dim)),
        );
        let r = run_trials("adjoint_on_witness", &cfg, Expectation::Violated, body);
        require(r.failures == 0 && r.vacuous == 0, || {
            format!(
                "d={dim}: adjoint map satisfied the condition in {} of {} draws",
                r.failures, r.trials
            )
        })?;
        min_sampled = min_sampled.min(r.min_refutation.expect("refutations recorded"));
        no_failures(&run(CheckId::AdjointCounterexample, dim, 0.5, 200))?;
    }
    Ok(format!(
        "residual = 0.5 within 1e-10; adjoint map fails for all 1000 U per dim, min gap {min_sampled:.2e}"
    ))
}

fn ce_matrix(x: &[C64], xp: &[C64]) -> CMatrix {
    aluthge_core::rank_one(x, xp).expect("non-zero vectors")
}

fn structural() -> Outcome {
    for dim in 2..=6 {
        let r = run(CheckId::StructuralProperties, dim, 0.5, 500);
        no_failures(&r)?;
    }
    Ok("dims 2-6 x 500 projection configurations, 0 failures".into())
}

fn iteration() -> Outcome {
    let tol = Tolerances::default();
    let mut converged = 0;
    let mut worst_normal: f64 = 0.0;
    let mut worst_drift: f64 = 0.0;
    for k in 0..500 {
        let mut rng = trial_rng(8, 2, k);
        let t = ginibre(&mut rng, 2);
        // Threshold `conv_tol * (1 + ||T||_F)` becomes an absolute 1e-8.
        let trace =
            iterate_aluthge(&t, 0.5, 500, 1e-8 / (1.0 + t.frobenius_norm()), &tol).map_err(|e| e.to_string())?;
        for row in trace.rows().map_err(|e| e.to_string())? {
            worst_drift = worst_drift.max(row.spectral_drift);
        }
        if trace.converged {
            converged += 1;
            worst_normal = worst_normal.max(normal_residual(trace.limit()));
        }
    }
    require(converged * 100 >= 95 * 500, || {
        format!("only {converged}/500 converged")
    })?;
    require(worst_normal <= 1e-6, || {
        format!("limit normality residual {worst_normal:e}")
    })?;
    require(worst_drift <= 1e-6, || format!("spectral drift {worst_drift:e}"))?;
    Ok(format!(
        "{converged}/500 converged, worst limit normality {worst_normal:.2e}, worst drift {worst_drift:.2e}"
    ))
}

fn determinism() -> Outcome {
    let verify = || -> Result<(i32, Vec<u8>), String> {
        let dir = TempDir::new().map_err(|e| e.to_string())?;
        let out = Command::new(env!("CARGO_BIN_EXE_aluthge"))
            .args(["verify", "--no-timestamp", "-q", "--out"])
            .arg(dir.path())
            .env_remove("ALUTHGE_SEED")
            .output()
            .map_err(|e| e.to_string())?;
        let bytes = fs::read(dir.path().join("aggregate.json")).map_err(|e| e.to_string())?;
        Ok((out.status.code().unwrap_or(-1), bytes))
    };
    let (code_a, a) = verify()?;
    let (code_b, b) = verify()?;
    require(a == b, || "aggregates differ".into())?;
    let v: serde_json::Value = serde_json::from_slice(&a).map_err(|e| e.to_string())?;
    require(code_a == 0 && code_b == 0 && v["failures"] == 0, || {
        format!("exit codes {code_a}/{code_b}, failures {}", v["failures"])
    })?;
    Ok(format!(
        "default suite twice, {} byte-identical aggregate bytes, 0 failures",
        a.len()
    ))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 9] = [
        ("rank-one closed form", rank_one_formula),
        ("kernel equivalence", kernel),
        ("spectrum invariance", spectrum),
        ("fixed points", fixed_points),
        (
            "Jordan and star-Jordan conditions for unitary conjugation",
            jordan_conditions,
        ),
        ("adjoint competitor falsified", competitor),
        ("structural properties", structural),
        ("2x2 iteration sanity", iteration),
        ("verify determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => emit(&format!("PASS criterion {}: {name}: {detail}", k + 1)),
            Err(why) => {
                emit(&format!("FAIL criterion {}: {name}: {why}", k + 1));
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
