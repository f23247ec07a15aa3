//! Verification run configuration: defaults, config file, flags, env.

use std::path::Path;

use aluthge_core::{CheckId, Tolerances};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SEED_ENV: &str = "ALUTHGE_SEED";

pub const DEFAULT_LAMBDA: f64 = 0.5;
pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_SEED: u64 = 7;

/// A fully resolved verification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub lambda: f64,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// Empty means every registered check.
    pub checks: Vec<CheckId>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lambda: DEFAULT_LAMBDA,
            dims: (2..=6).collect(),
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            tolerances: Tolerances::default(),
            checks: Vec::new(),
        }
    }
}

/// Config file contents; every field optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub lambda: Option<f64>,
    pub dims: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub tolerances: Option<PartialTolerances>,
    pub checks: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialTolerances {
    pub rank_rel: Option<f64>,
    pub eq_abs: Option<f64>,
    pub fix_rel: Option<f64>,
    pub spec_rel: Option<f64>,
}

/// Command-line overrides, already parsed by clap.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub lambda: Option<f64>,
    pub dims: Option<String>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub tol_eq: Option<f64>,
    pub tol_rank: Option<f64>,
    pub tol_fix: Option<f64>,
    pub checks: Option<String>,
}

impl RunConfig {
    pub fn checks_to_run(&self) -> Vec<CheckId> {
        if self.checks.is_empty() {
            CheckId::ALL.to_vec()
        } else {
            self.checks.clone()
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(CliError::Config(format!(
                "lambda must lie in [0, 1], got {}",
                self.lambda
            )));
        }
        if self.dims.is_empty() {
            return Err(CliError::Config("dims must not be empty".into()));
        }
        if let Some(d) = self.dims.iter().find(|&&d| d < 2) {
            return Err(CliError::Config(format!("every dimension must be at least 2, got {d}")));
        }
        if self.trials == 0 {
            return Err(CliError::Config("trials must be at least 1".into()));
        }
        self.tolerances.validate().map_err(|e| CliError::Config(e.to_string()))
    }

    /// Layers: defaults, then `file`, then flags, then the seed env var.
    pub fn resolve(file: Option<&Path>, flags: &Overrides, env_seed: Option<String>) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
                path: path.to_path_buf(),
                source,
            })?;
            let f: ConfigFile =
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            cfg.apply_file(f)?;
        }
        if let Some(l) = flags.lambda {
            cfg.lambda = l;
        }
        if let Some(d) = &flags.dims {
            cfg.dims = parse_dims(d)?;
        }
        if let Some(t) = flags.trials {
            cfg.trials = t;
        }
        if let Some(s) = flags.seed {
            cfg.seed = s;
        }
        if let Some(v) = flags.tol_eq {
            cfg.tolerances.eq_abs = v;
        }
        if let Some(v) = flags.tol_rank {
            cfg.tolerances.rank_rel = v;
        }
        if let Some(v) = flags.tol_fix {
            cfg.tolerances.fix_rel = v;
        }
        if let Some(c) = &flags.checks {
            cfg.checks = parse_checks(c.split(','))?;
        }
        if let Some(s) = env_seed {
            cfg.seed = s
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("{SEED_ENV} must be an unsigned 64-bit integer, got '{s}'")))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, f: ConfigFile) -> Result<(), CliError> {
        if let Some(l) = f.lambda {
            self.lambda = l;
        }
        if let Some(d) = f.dims {
            self.dims = d;
        }
        if let Some(t) = f.trials {
            self.trials = t;
        }
        if let Some(s) = f.seed {
            self.seed = s;
        }
        if let Some(t) = f.tolerances {
            let tol = &mut self.tolerances;
            tol.rank_rel = t.rank_rel.unwrap_or(tol.rank_rel);
            tol.eq_abs = t.eq_abs.unwrap_or(tol.eq_abs);
            tol.fix_rel = t.fix_rel.unwrap_or(tol.fix_rel);
            tol.spec_rel = t.spec_rel.unwrap_or(tol.spec_rel);
        }
        if let Some(c) = f.checks {
            self.checks = parse_checks(c.iter().map(String::as_str))?;
        }
        Ok(())
    }
}

/// `"2,3,5"`, `"2-6"` or a mix such as `"2,4-6"`.
pub fn parse_dims(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = |part: &str| CliError::Config(format!("bad dimension list entry '{part}'"));
    let mut dims = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once('-') {
            let a: usize = a.trim().parse().map_err(|_| bad(part))?;
            let b: usize = b.trim().parse().map_err(|_| bad(part))?;
            if a > b {
                return Err(bad(part));
            }
            dims.extend(a..=b);
        } else {
            dims.push(part.parse().map_err(|_| bad(part))?);
        }
    }
    dims.sort_unstable();
    dims.dedup();
    Ok(dims)
}

fn parse_checks<'a>(names: impl Iterator<Item = &'a str>) -> Result<Vec<CheckId>, CliError> {
    let mut ids = Vec::new();
    for name in names.map(str::trim).filter(|n| !n.is_empty()) {
        let id: CheckId = name
            .parse()
            .map_err(|e: aluthge_core::checks::UnknownCheck| CliError::Config(e.to_string()))?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    Ok(ids)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_syntax() {
        assert_eq!(parse_dims("2-6").unwrap(), vec![2, 3, 4, 5, 6]);
        assert_eq!(parse_dims("6, 2,4-5,2").unwrap(), vec![2, 4, 5, 6]);
        assert!(parse_dims("3-2").is_err());
        assert!(parse_dims("x").is_err());
    }

    #[test]
    fn layering_order() {
        let flags = Overrides {
            seed: Some(3),
            trials: Some(10),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(None, &flags, None).unwrap();
        assert_eq!((cfg.seed, cfg.trials, cfg.lambda), (3, 10, 0.5));
        let cfg = RunConfig::resolve(None, &flags, Some("99".into())).unwrap();
        assert_eq!(cfg.seed, 99);
        assert!(RunConfig::resolve(None, &flags, Some("-1".into())).is_err());
    }

    #[test]
    fn validation() {
        let zero = Overrides {
            trials: Some(0),
            ..Default::default()
        };
        assert!(RunConfig::resolve(None, &zero, None).is_err());
        let lam = Overrides {
            lambda: Some(1.5),
            ..Default::default()
        };
        assert!(RunConfig::resolve(None, &lam, None).is_err());
        let dims = Overrides {
            dims: Some("1,2".into()),
            ..Default::default()
        };
        assert!(RunConfig::resolve(None, &dims, None).is_err());
        let checks = Overrides {
            checks: Some("fixed_points,bogus".into()),
            ..Default::default()
        };
        assert!(RunConfig::resolve(None, &checks, None).is_err());
    }
}
