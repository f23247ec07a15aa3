use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use aluthge_core::{
    aluthge_from_polar, iterate_aluthge, polar, CheckConfig, CheckId, CheckReport, Expectation, Tolerances,
};
use serde::Serialize;

use crate::cli::{AggregateFormat, IterateArgs, TraceFormat, TransformArgs, VerifyArgs};
use crate::config::{Overrides, RunConfig, SEED_ENV};
use crate::error::{exit, CliError};
use crate::fsio::{read_square, write_atomic, write_json, write_matrix};

fn tolerances(tol_rank: Option<f64>) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::default();
    if let Some(r) = tol_rank {
        tol.rank_rel = r;
    }
    tol.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(tol)
}

fn sibling(output: &Path, suffix: &str) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    output.with_file_name(format!("{stem}.{suffix}.json"))
}

pub fn transform(args: &TransformArgs) -> Result<i32, CliError> {
    if !(0.0..=1.0).contains(&args.lambda) {
        return Err(CliError::Usage(format!(
            "--lambda must lie in [0, 1], got {}",
            args.lambda
        )));
    }
    let tol = tolerances(args.tol_rank)?;
    let t = read_square(&args.input)?;
    let p = polar(&t, &tol)?;
    write_matrix(&args.output, &aluthge_from_polar(&p, args.lambda))?;
    if args.factors {
        write_matrix(&sibling(&args.output, "isometry"), p.isometry_part())?;
        write_matrix(&sibling(&args.output, "modulus"), p.modulus())?;
    }
    Ok(exit::OK)
}

#[derive(Debug, Serialize)]
struct TraceRecord {
    step: usize,
    delta_frobenius: f64,
    distance_to_normal: f64,
    spectral_drift: f64,
}

#[derive(Serialize)]
struct TraceJson<'a> {
    lambda: f64,
    converged: bool,
    limit_quasi_normal: bool,
    steps: usize,
    rows: &'a [TraceRecord],
}

pub fn iterate(args: &IterateArgs) -> Result<i32, CliError> {
    if !(args.lambda > 0.0 && args.lambda < 1.0) {
        return Err(CliError::Usage(format!(
            "--lambda must lie in (0, 1), got {}",
            args.lambda
        )));
    }
    if args.max_iter == 0 {
        return Err(CliError::Usage("--max-iter must be at least 1".into()));
    }
    if !(args.conv_tol > 0.0 && args.conv_tol.is_finite()) {
        return Err(CliError::Usage(format!(
            "--conv-tol must be positive, got {}",
            args.conv_tol
        )));
    }
    let tol = tolerances(args.tol_rank)?;
    let t = read_square(&args.input)?;
    let trace = iterate_aluthge(&t, args.lambda, args.max_iter, args.conv_tol, &tol)?;
    let rows: Vec<TraceRecord> = trace
        .rows()?
        .into_iter()
        .map(|r| TraceRecord {
            step: r.step,
            delta_frobenius: r.delta_frobenius,
            distance_to_normal: r.distance_to_normal,
            spectral_drift: r.spectral_drift,
        })
        .collect();

    match args.format {
        TraceFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r).map_err(|e| CliError::Write {
                    path: args.output.clone(),
                    source: e.into(),
                })?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Write {
                path: args.output.clone(),
                source: e.into_error(),
            })?;
            write_atomic(&args.output, &bytes)?;
        }
        TraceFormat::Json => write_json(
            &args.output,
            &TraceJson {
                lambda: args.lambda,
                converged: trace.converged,
                limit_quasi_normal: trace.limit_quasi_normal,
                steps: trace.steps(),
                rows: &rows,
            },
        )?,
    }
    if let Some(path) = &args.final_iterate {
        write_matrix(path, trace.limit())?;
    }
    println!(
        "converged={} steps={} final_delta={:e} limit_quasi_normal={}",
        trace.converged,
        trace.steps(),
        trace.step_deltas.last().copied().unwrap_or(0.0),
        trace.limit_quasi_normal
    );
    Ok(exit::OK)
}

#[derive(Debug, Serialize)]
struct Skipped {
    check_id: CheckId,
    reason: String,
}

#[derive(Debug, Serialize)]
struct Summary {
    check_id: String,
    dim: usize,
    trials: usize,
    failures: usize,
    vacuous: usize,
    redrawn: usize,
    worst_residual: f64,
    min_refutation: Option<f64>,
    expect: Expectation,
    passed: bool,
    report: String,
}

impl Summary {
    fn new(r: &CheckReport, file: &str) -> Self {
        Self {
            check_id: r.check_id.clone(),
            dim: r.dim,
            trials: r.trials,
            failures: r.failures,
            vacuous: r.vacuous,
            redrawn: r.redrawn,
            worst_residual: r.worst_residual,
            min_refutation: r.min_refutation,
            expect: r.expect,
            passed: r.passed(),
            report: file.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
struct Aggregate<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_at: Option<u64>,
    config: &'a RunConfig,
    failures: usize,
    passed: bool,
    skipped: Vec<Skipped>,
    reports: Vec<Summary>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    check_id: &'a str,
    dim: usize,
    lambda: f64,
    seed: u64,
    trials: usize,
    failures: usize,
    vacuous: usize,
    redrawn: usize,
    worst_residual: f64,
    min_refutation: Option<f64>,
    expect: Expectation,
    passed: bool,
    generated_at: Option<u64>,
}

pub fn verify(args: &VerifyArgs) -> Result<i32, CliError> {
    let flags = Overrides {
        lambda: args.lambda,
        dims: args.dims.clone(),
        trials: args.trials,
        seed: args.seed,
        tol_eq: args.tol_eq,
        tol_rank: args.tol_rank,
        tol_fix: args.tol_fix,
        checks: args.checks.clone(),
    };
    let env_seed = std::env::var(SEED_ENV).ok().filter(|s| !s.trim().is_empty());
    let cfg = RunConfig::resolve(args.config.as_deref(), &flags, env_seed)?;

    let mut skipped = Vec::new();
    let mut summaries = Vec::new();
    let mut failures = 0;
    for check in cfg.checks_to_run() {
        let range = check.lambda_range();
        if !range.contains(cfg.lambda) {
            skipped.push(Skipped {
                check_id: check,
                reason: format!("lambda {} outside {}", cfg.lambda, range.describe()),
            });
            if !args.quiet {
                println!("SKIP {check} (lambda outside {})", range.describe());
            }
            continue;
        }
        for &dim in &cfg.dims {
            let cc = CheckConfig::new(dim, cfg.seed, cfg.lambda, cfg.trials).with_tolerances(cfg.tolerances);
            let report = check.run(&cc)?;
            let file = format!("{check}_d{dim}.json");
            write_json(&args.out.join(&file), &report)?;
            failures += report.failures;
            if !args.quiet {
                println!(
                    "{} {check} d={dim} failures={}/{} worst_residual={:e}",
                    if report.passed() { "PASS" } else { "FAIL" },
                    report.failures,
                    report.trials,
                    report.worst_residual
                );
            }
            summaries.push(Summary::new(&report, &file));
        }
    }

    let generated_at = (!args.no_timestamp).then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    let (n_reports, n_skipped) = (summaries.len(), skipped.len());
    let aggregate_path = match args.format {
        AggregateFormat::Json => {
            let path = args.out.join("aggregate.json");
            let agg = Aggregate {
                generated_at,
                config: &cfg,
                failures,
                passed: failures == 0,
                skipped,
                reports: summaries,
            };
            write_json(&path, &agg)?;
            path
        }
        AggregateFormat::Csv => {
            let path = args.out.join("aggregate.csv");
            let werr = |source: std::io::Error| CliError::Write {
                path: path.clone(),
                source,
            };
            let mut w = csv::Writer::from_writer(Vec::new());
            for s in &summaries {
                w.serialize(CsvRow {
                    check_id: &s.check_id,
                    dim: s.dim,
                    lambda: cfg.lambda,
                    seed: cfg.seed,
                    trials: s.trials,
                    failures: s.failures,
                    vacuous: s.vacuous,
                    redrawn: s.redrawn,
                    worst_residual: s.worst_residual,
                    min_refutation: s.min_refutation,
                    expect: s.expect,
                    passed: s.passed,
                    generated_at,
                })
                .map_err(|e| werr(e.into()))?;
            }
            let bytes = w.into_inner().map_err(|e| werr(e.into_error()))?;
            write_atomic(&path, &bytes)?;
            path
        }
    };
    println!(
        "{} failures={failures} reports={} skipped={} aggregate={}",
        if failures == 0 { "PASS" } else { "FAIL" },
        n_reports,
        n_skipped,
        aggregate_path.display()
    );
    Ok(if failures == 0 { exit::OK } else { exit::CHECK_FAILURES })
}
