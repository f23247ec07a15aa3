use serde::{Deserialize, Serialize};

use crate::error::MatrixError;

/// Numerical slack used by every comparison in the crate.
///
/// All fields are relative or mixed absolute/relative coefficients and must
/// lie strictly between 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Singular value `s_i` counts as zero iff `s_i <= rank_rel * s_max * max(rows, cols)`.
    pub rank_rel: f64,
    /// Matrix equality: `||X - Y||_F <= eq_abs * (1 + max(||X||_F, ||Y||_F))`.
    pub eq_abs: f64,
    /// Fixed-point and quasi-normality slack.
    pub fix_rel: f64,
    /// Spectrum matching slack: pairing distance `<= spec_rel * (1 + ||M||_F)`.
    #[serde(default = "default_spec_rel")]
    pub spec_rel: f64,
}

fn default_spec_rel() -> f64 {
    1e-7
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_rel: 1e-12,
            eq_abs: 1e-9,
            fix_rel: 1e-8,
            spec_rel: default_spec_rel(),
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<(), MatrixError> {
        let fields = [
            ("rank_rel", self.rank_rel),
            ("eq_abs", self.eq_abs),
            ("fix_rel", self.fix_rel),
            ("spec_rel", self.spec_rel),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value < 1.0) {
                return Err(MatrixError::InvalidTolerances(format!(
                    "{name} = {value} must lie in (0, 1)"
                )));
            }
        }
        Ok(())
    }

    /// Absolute slack for an equality check between quantities of size `scale`.
    pub fn eq_slack(&self, scale: f64) -> f64 {
        self.eq_abs * (1.0 + scale)
    }

    /// Copy with `fix_rel` multiplied by `factor`, used for iterated results.
    pub fn relaxed_fix(&self, factor: f64) -> Self {
        Self {
            fix_rel: (self.fix_rel * factor).min(0.5),
            ..*self
        }
    }
}
