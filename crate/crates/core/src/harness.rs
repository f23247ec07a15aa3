//! Trial bookkeeping shared by the lemma and map checks.
//!
//! A trial makes any number of assertions. Confirm-side assertions compare a
//! residual against `rel * (1 + scale)`. Refute-side assertions draw a
//! generic instance whose residual must clear ten times the slack; draws in
//! the dead band between one and ten slacks are discarded and redrawn.

use rand::Rng;
use rayon::prelude::*;

use crate::error::MatrixError;
use crate::generators::{trial_rng, TrialRng};
use crate::report::{CheckReport, Expectation, MatrixFile, NamedMatrix, Witness};
use crate::tolerance::Tolerances;
use crate::CMatrix;

/// Refutation threshold as a multiple of the pass slack.
pub const REFUTE_FACTOR: f64 = 10.0;
/// Draws allowed per refutation before the dead band counts as a failure.
pub const MAX_DRAWS: usize = 16;

/// Parameters of one check run at one dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckConfig {
    pub dim: usize,
    pub seed: u64,
    pub lambda: f64,
    pub trials: usize,
    pub tol: Tolerances,
}

impl CheckConfig {
    pub fn new(dim: usize, seed: u64, lambda: f64, trials: usize) -> Self {
        Self {
            dim,
            seed,
            lambda,
            trials,
            tol: Tolerances::default(),
        }
    }

    pub fn with_tolerances(self, tol: Tolerances) -> Self {
        Self { tol, ..self }
    }
}

/// A residual and the slack it is judged against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gauge {
    pub raw: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    Holds,
    Fails,
    Band,
}

impl Gauge {
    pub fn new(raw: f64, slack: f64) -> Self {
        Self { raw, slack }
    }

    fn class(&self) -> Class {
        if self.raw <= self.slack {
            Class::Holds
        } else if self.raw > REFUTE_FACTOR * self.slack {
            Class::Fails
        } else {
            Class::Band
        }
    }
}

/// One refutation draw.
///
/// With a premise, the premise and conclusion must agree (both hold or both
/// clearly fail). Without one, the conclusion must clearly fail.
#[derive(Debug, Clone)]
pub struct Probe {
    pub premise: Option<Gauge>,
    pub conclusion: Gauge,
    /// Both compared sides are below slack: nothing to discriminate.
    pub vacuous: bool,
    pub inputs: Vec<(String, CMatrix)>,
}

impl Probe {
    pub fn new(conclusion: Gauge) -> Self {
        Self {
            premise: None,
            conclusion,
            vacuous: false,
            inputs: Vec::new(),
        }
    }

    pub fn premise(mut self, g: Gauge) -> Self {
        self.premise = Some(g);
        self
    }

    pub fn vacuous(mut self, v: bool) -> Self {
        self.vacuous = v;
        self
    }

    pub fn input(mut self, name: &str, m: &CMatrix) -> Self {
        self.inputs.push((name.to_string(), m.clone()));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub verdict: Verdict,
    pub residual: f64,
    pub refutation: Option<f64>,
    pub redrawn: usize,
    pub note: String,
    pub inputs: Vec<(String, CMatrix)>,
}

/// Accumulates the assertions of one trial.
#[derive(Debug, Default)]
pub struct Trial {
    failures: Vec<String>,
    residual: f64,
    worst_label: String,
    refutation: Option<f64>,
    redrawn: usize,
    judged: usize,
    vacuous: usize,
    inputs: Vec<(String, CMatrix)>,
}

impl Trial {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn input(&mut self, name: &str, m: &CMatrix) {
        self.inputs.push((name.to_string(), m.clone()));
    }

    pub fn fail(&mut self, note: String) {
        self.failures.push(note);
    }

    fn track(&mut self, label: &str, normalized: f64) {
        if normalized > self.residual || self.worst_label.is_empty() {
            self.residual = self.residual.max(normalized);
            self.worst_label = label.to_string();
        }
    }

    /// Asserts `raw <= rel * (1 + scale)`.
    pub fn confirm(&mut self, label: &str, raw: f64, scale: f64, rel: f64) -> bool {
        let slack = rel * (1.0 + scale);
        self.judged += 1;
        self.track(label, raw / (1.0 + scale));
        let ok = raw <= slack;
        if !ok {
            self.failures
                .push(format!("{label}: residual {raw:e} exceeds slack {slack:e}"));
        }
        ok
    }

    /// Like [`Trial::confirm`], but a trial whose two sides are both within
    /// slack of zero is tallied as vacuous instead of judged.
    pub fn confirm_nonvacuous(&mut self, label: &str, raw: f64, scale: f64, rel: f64, sides: (f64, f64)) -> bool {
        let slack = rel * (1.0 + scale);
        if sides.0 <= slack && sides.1 <= slack {
            self.vacuous += 1;
            self.track(label, raw / (1.0 + scale));
            return true;
        }
        self.confirm(label, raw, scale, rel)
    }

    /// Draws probes until one lands outside the dead band, then judges it.
    pub fn refute<F>(&mut self, label: &str, rng: &mut TrialRng, mut draw: F) -> Result<(), MatrixError>
    where
        F: FnMut(&mut TrialRng) -> Result<Probe, MatrixError>,
    {
        let mut last = None;
        for _ in 0..MAX_DRAWS {
            let probe = draw(rng)?;
            if probe.vacuous {
                self.vacuous += 1;
                return Ok(());
            }
            let expected = probe.premise.map_or(Class::Fails, |g| g.class());
            let got = probe.conclusion.class();
            if expected == Class::Band || got == Class::Band {
                self.redrawn += 1;
                last = Some(probe);
                continue;
            }
            self.judged += 1;
            if expected == Class::Fails && got == Class::Fails {
                let r = probe.conclusion.raw;
                self.refutation = Some(self.refutation.map_or(r, |m: f64| m.min(r)));
            }
            for (name, m) in &probe.inputs {
                self.inputs.push((format!("{label}.{name}"), m.clone()));
            }
            if expected != got {
                let premise = probe.premise.map_or(String::new(), |p| {
                    format!("premise {:e} (slack {:e}), ", p.raw, p.slack)
                });
                self.failures.push(format!(
                    "{label}: {premise}conclusion {:e} (slack {:e}) disagrees",
                    probe.conclusion.raw, probe.conclusion.slack
                ));
            }
            return Ok(());
        }
        let probe = last.expect("at least one draw");
        for (name, m) in &probe.inputs {
            self.inputs.push((format!("{label}.{name}"), m.clone()));
        }
        self.judged += 1;
        self.failures.push(format!(
            "{label}: {MAX_DRAWS} draws all landed in the dead band (last conclusion {:e}, slack {:e})",
            probe.conclusion.raw, probe.conclusion.slack
        ));
        Ok(())
    }

    pub fn finish(self) -> TrialOutcome {
        let verdict = if !self.failures.is_empty() {
            Verdict::Fail
        } else if self.judged == 0 && self.vacuous > 0 {
            Verdict::Vacuous
        } else {
            Verdict::Pass
        };
        let note = if self.failures.is_empty() {
            if self.worst_label.is_empty() {
                "pass".to_string()
            } else {
                format!("largest residual at {}", self.worst_label)
            }
        } else {
            self.failures.join("; ")
        };
        TrialOutcome {
            verdict,
            residual: self.residual,
            refutation: self.refutation,
            redrawn: self.redrawn,
            note,
            inputs: self.inputs,
        }
    }
}

/// Body of a check: fills in one trial from its own random stream.
pub trait TrialBody: Fn(&CheckConfig, &mut TrialRng, &mut Trial) -> Result<(), MatrixError> + Sync {}
impl<F> TrialBody for F where F: Fn(&CheckConfig, &mut TrialRng, &mut Trial) -> Result<(), MatrixError> + Sync {}

/// Runs a single trial in isolation.
pub fn run_trial(cfg: &CheckConfig, index: usize, body: &impl TrialBody) -> TrialOutcome {
    let mut rng = trial_rng(cfg.seed, cfg.dim, index);
    let mut trial = Trial::new();
    if let Err(e) = body(cfg, &mut rng, &mut trial) {
        trial.fail(format!("error: {e}"));
    }
    trial.finish()
}

/// Runs all trials (in parallel) and aggregates them in index order.
pub fn run_trials(check_id: &str, cfg: &CheckConfig, expect: Expectation, body: impl TrialBody) -> CheckReport {
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t, &body))
        .collect();
    aggregate(check_id, cfg, expect, &outcomes)
}

fn aggregate(check_id: &str, cfg: &CheckConfig, expect: Expectation, outcomes: &[TrialOutcome]) -> CheckReport {
    let failures = outcomes.iter().filter(|o| o.verdict == Verdict::Fail).count();
    let vacuous = outcomes.iter().filter(|o| o.verdict == Verdict::Vacuous).count();
    let redrawn = outcomes.iter().map(|o| o.redrawn).sum();
    let worst_residual = outcomes.iter().map(|o| o.residual).fold(0.0, f64::max);
    let min_refutation = outcomes
        .iter()
        .filter_map(|o| o.refutation)
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.min(r))));

    // Worst failing trial, else worst residual; first index wins ties.
    let pick = |pred: &dyn Fn(&TrialOutcome) -> bool| {
        outcomes.iter().enumerate().filter(|(_, o)| pred(o)).fold(
            None,
            |best: Option<(usize, &TrialOutcome)>, (i, o)| match best {
                Some((_, b)) if b.residual >= o.residual => best,
                _ => Some((i, o)),
            },
        )
    };
    let chosen = pick(&|o| o.verdict == Verdict::Fail).or_else(|| pick(&|_| true));
    let witness = chosen.map(|(i, o)| Witness {
        trial: i,
        note: o.note.clone(),
        residual: o.residual,
        matrices: o
            .inputs
            .iter()
            .map(|(name, m)| NamedMatrix {
                name: name.clone(),
                matrix: MatrixFile::from(m),
            })
            .collect(),
    });

    CheckReport {
        check_id: check_id.to_string(),
        seed: cfg.seed,
        lambda: cfg.lambda,
        dim: cfg.dim,
        trials: cfg.trials,
        failures,
        vacuous,
        redrawn,
        worst_residual,
        min_refutation,
        expect,
        witness,
        tolerances: cfg.tol,
    }
}

/// Uniform draw from `[lo, hi)`, used by trial bodies for scalar parameters.
pub fn uniform(rng: &mut TrialRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}
