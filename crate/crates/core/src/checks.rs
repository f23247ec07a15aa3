//! Registry of every randomized check, addressable by a stable id.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::generators::{self_test_all, TrialRng};
use crate::harness::{run_trial, run_trials, CheckConfig, Trial, TrialOutcome};
use crate::lemmas;
use crate::maps::{self, MapKind, MapSpec, PairSource};
use crate::report::{CheckReport, Expectation};
use crate::{MatrixError, C64};

/// Samples drawn per generator kind before a check runs.
const SELF_TEST_SAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    RankOneFormula,
    ProjectionAbsorb,
    ScalarProjection,
    SquareIdentity,
    SelfadjointLemmas,
    NilpotentKernel,
    SpectrumInvariance,
    FixedPoints,
    JordanCondition,
    StarJordanCondition,
    JordanConditionAdjoint,
    JordanConditionScaled,
    StructuralProperties,
    VectorStateIdentity,
    AdjointCounterexample,
}

/// Admissible `λ` for a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaRange {
    /// `(0, 1)`
    Open,
    /// `(0, 1]`
    LeftOpen,
    /// `[0, 1]`
    Closed,
}

impl LambdaRange {
    pub fn contains(self, l: f64) -> bool {
        match self {
            LambdaRange::Open => l > 0.0 && l < 1.0,
            LambdaRange::LeftOpen => l > 0.0 && l <= 1.0,
            LambdaRange::Closed => (0.0..=1.0).contains(&l),
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            LambdaRange::Open => "(0, 1)",
            LambdaRange::LeftOpen => "(0, 1]",
            LambdaRange::Closed => "[0, 1]",
        }
    }
}

type Body = Box<dyn Fn(&CheckConfig, &mut TrialRng, &mut Trial) -> Result<(), MatrixError> + Sync>;

impl CheckId {
    pub const ALL: [CheckId; 15] = [
        CheckId::RankOneFormula,
        CheckId::ProjectionAbsorb,
        CheckId::ScalarProjection,
        CheckId::SquareIdentity,
        CheckId::SelfadjointLemmas,
        CheckId::NilpotentKernel,
        CheckId::SpectrumInvariance,
        CheckId::FixedPoints,
        CheckId::JordanCondition,
        CheckId::StarJordanCondition,
        CheckId::JordanConditionAdjoint,
        CheckId::JordanConditionScaled,
        CheckId::StructuralProperties,
        CheckId::VectorStateIdentity,
        CheckId::AdjointCounterexample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::RankOneFormula => "rank_one_formula",
            CheckId::ProjectionAbsorb => "projection_absorb",
            CheckId::ScalarProjection => "scalar_projection",
            CheckId::SquareIdentity => "square_identity",
            CheckId::SelfadjointLemmas => "selfadjoint_lemmas",
            CheckId::NilpotentKernel => "nilpotent_kernel",
            CheckId::SpectrumInvariance => "spectrum_invariance",
            CheckId::FixedPoints => "fixed_points",
            CheckId::JordanCondition => "jordan_condition",
            CheckId::StarJordanCondition => "star_jordan_condition",
            CheckId::JordanConditionAdjoint => "jordan_condition_adjoint",
            CheckId::JordanConditionScaled => "jordan_condition_scaled",
            CheckId::StructuralProperties => "structural_properties",
            CheckId::VectorStateIdentity => "vector_state_identity",
            CheckId::AdjointCounterexample => "adjoint_counterexample",
        }
    }

    pub fn lambda_range(self) -> LambdaRange {
        match self {
            CheckId::SpectrumInvariance | CheckId::VectorStateIdentity => LambdaRange::Closed,
            CheckId::NilpotentKernel => LambdaRange::LeftOpen,
            _ => LambdaRange::Open,
        }
    }

    pub fn expectation(self) -> Expectation {
        match self {
            CheckId::JordanConditionAdjoint | CheckId::JordanConditionScaled => Expectation::Violated,
            _ => Expectation::Holds,
        }
    }

    fn body(self) -> Body {
        match self {
            CheckId::RankOneFormula => Box::new(lemmas::rank_one_formula),
            CheckId::ProjectionAbsorb => Box::new(lemmas::projection_absorb),
            CheckId::ScalarProjection => Box::new(lemmas::scalar_projection),
            CheckId::SquareIdentity => Box::new(lemmas::square_identity),
            CheckId::SelfadjointLemmas => Box::new(lemmas::selfadjoint_lemmas),
            CheckId::NilpotentKernel => Box::new(lemmas::nilpotent_kernel),
            CheckId::SpectrumInvariance => Box::new(lemmas::spectrum_invariance),
            CheckId::FixedPoints => Box::new(lemmas::fixed_points),
            CheckId::JordanCondition => Box::new(maps::jordan_condition(
                MapSpec::random(MapKind::UnitaryConj),
                PairSource::Ginibre,
            )),
            CheckId::StarJordanCondition => Box::new(maps::star_jordan_condition(
                MapSpec::random(MapKind::UnitaryConj),
                PairSource::Ginibre,
            )),
            CheckId::JordanConditionAdjoint => Box::new(maps::jordan_condition(
                MapSpec::random(MapKind::AdjointConj),
                PairSource::Ginibre,
            )),
            CheckId::JordanConditionScaled => Box::new(maps::jordan_condition(
                MapSpec::scaled(C64::new(2.0, 0.0)),
                PairSource::Ginibre,
            )),
            CheckId::StructuralProperties => Box::new(maps::structural_properties),
            CheckId::VectorStateIdentity => Box::new(maps::vector_state_identity),
            CheckId::AdjointCounterexample => Box::new(maps::adjoint_counterexample_check),
        }
    }

    fn prepare(self, cfg: &CheckConfig) -> Result<Body, MatrixError> {
        validate_config(cfg)?;
        let range = self.lambda_range();
        if !range.contains(cfg.lambda) {
            return Err(MatrixError::LambdaOutOfRange {
                value: cfg.lambda,
                range: range.describe(),
            });
        }
        self_test_all(cfg.dim, cfg.seed, SELF_TEST_SAMPLES)?;
        Ok(self.body())
    }

    /// Runs every trial and returns the report.
    pub fn run(self, cfg: &CheckConfig) -> Result<CheckReport, MatrixError> {
        let body = self.prepare(cfg)?;
        Ok(run_trials(self.name(), cfg, self.expectation(), body))
    }

    /// Re-runs a single trial, e.g. the one named by a report's witness.
    pub fn replay(self, cfg: &CheckConfig, trial: usize) -> Result<TrialOutcome, MatrixError> {
        let body = self.prepare(cfg)?;
        Ok(run_trial(cfg, trial, &body))
    }
}

/// Dimension, trial count and tolerances of a run.
pub fn validate_config(cfg: &CheckConfig) -> Result<(), MatrixError> {
    if cfg.dim < 2 {
        return Err(MatrixError::DimensionTooSmall { dim: cfg.dim, min: 2 });
    }
    if cfg.trials == 0 {
        return Err(MatrixError::Precondition("trials must be at least 1".into()));
    }
    cfg.tol.validate()
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown check id '{0}'")]
pub struct UnknownCheck(pub String);

impl FromStr for CheckId {
    type Err = UnknownCheck;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().replace('-', "_");
        CheckId::ALL
            .into_iter()
            .find(|c| c.name() == key)
            .ok_or_else(|| UnknownCheck(s.to_string()))
    }
}
