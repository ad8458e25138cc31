use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::bounds::BoundKind;
use crate::error::{NflError, Result};
use crate::learning::{LearnerMethod, OptimizerConfig};
use crate::sampling::SetStyle;

/// Largest `r` or `t` that fits the trial stream layout.
pub const MAX_GRID_VALUE: usize = (1 << 16) - 1;
/// Largest `n_unitaries` or `n_sets` that fits the trial stream layout.
pub const MAX_REPEATS: usize = 1 << 15;

pub const DEFAULT_N_UNITARIES: usize = 10;

/// A Monte Carlo sweep over `(r, t)` at fixed dimension `d`.
///
/// Read with [`ExperimentConfig::from_json_str`] to apply the defaults for
/// optional keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub d: usize,
    pub r_values: Vec<usize>,
    pub t_values: Vec<usize>,
    pub n_unitaries: usize,
    pub n_sets: usize,
    pub learner: LearnerMethod,
    pub set_style: SetStyle,
    pub optimizer: OptimizerConfig,
    pub master_seed: u64,
    pub bounds_requested: Vec<BoundKind>,
    /// Directory receiving `result.json`, `grid.csv` and `bounds.csv`.
    pub output_path: String,
}

/// `n_sets` when absent: 10 for qubits, 100 otherwise.
pub fn default_n_sets(d: usize) -> usize {
    if d <= 2 {
        10
    } else {
        100
    }
}

impl ExperimentConfig {
    /// Parses a JSON config, filling in absent optional keys. A missing
    /// `master_seed` is taken from `fallback_seed` when given.
    pub fn from_json_str(text: &str, fallback_seed: Option<u64>) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| NflError::config("<document>", e.to_string()))?;
        Self::from_json_value(value, fallback_seed)
    }

    pub fn from_json_value(mut value: serde_json::Value, fallback_seed: Option<u64>) -> Result<Self> {
        let obj = value
            .as_object_mut()
            .ok_or_else(|| NflError::config("<document>", "expected a JSON object"))?;
        let d = obj.get("d").and_then(|v| v.as_u64());
        let defaults = [
            ("n_unitaries", serde_json::json!(DEFAULT_N_UNITARIES)),
            ("learner", serde_json::json!(LearnerMethod::Perfect)),
            ("set_style", serde_json::json!(SetStyle::Generic)),
            ("optimizer", serde_json::json!({})),
            ("bounds_requested", serde_json::json!([])),
        ];
        for (key, default) in defaults {
            obj.entry(key).or_insert(default);
        }
        if let Some(d) = d {
            obj.entry("n_sets")
                .or_insert(serde_json::json!(default_n_sets(d as usize)));
        }
        if let Some(seed) = fallback_seed {
            obj.entry("master_seed").or_insert(serde_json::json!(seed));
        }

        let cfg: ExperimentConfig = serde_json::from_value(value).map_err(field_error)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Field-level checks; `ConfigInvalid` names the offending key.
    pub fn validate(&self) -> Result<()> {
        let err = |field: &str, reason: &str| NflError::config(field, reason);
        if self.d < 2 {
            return Err(err("d", "must be at least 2"));
        }
        check_list("r_values", &self.r_values, |r| {
            (1..=self.d.min(MAX_GRID_VALUE))
                .contains(&r)
                .then_some(())
                .ok_or(format!("rank {r} outside 1..={}", self.d))
        })?;
        check_list("t_values", &self.t_values, |t| {
            (t <= MAX_GRID_VALUE).then_some(()).ok_or(format!("t = {t} too large"))
        })?;
        for (name, n) in [("n_unitaries", self.n_unitaries), ("n_sets", self.n_sets)] {
            if n == 0 || n > MAX_REPEATS {
                return Err(err(name, &format!("must be in 1..={MAX_REPEATS}")));
            }
        }
        self.optimizer.validate()?;
        match (self.learner, self.optimizer.shots) {
            (LearnerMethod::VariationalShots, None) => {
                return Err(err("optimizer.shots", "required by learner variational_shots"))
            }
            (LearnerMethod::Variational, Some(_)) => {
                return Err(err("optimizer.shots", "learner variational uses the exact cost"))
            }
            _ => {}
        }
        if self.output_path.is_empty() {
            return Err(err("output_path", "must not be empty"));
        }
        Ok(())
    }

    /// `(r, t)` pairs in sweep order with `r·t ≤ d`; the rest are skipped
    /// with a log notice.
    pub fn grid_points(&self) -> Vec<(usize, usize)> {
        let mut points = Vec::new();
        for &r in &self.r_values {
            for &t in &self.t_values {
                if r * t <= self.d {
                    points.push((r, t));
                } else {
                    log::info!("skipping grid point r={r} t={t}: r*t exceeds d={}", self.d);
                }
            }
        }
        points
    }
}

fn check_list(name: &str, values: &[usize], check: impl Fn(usize) -> std::result::Result<(), String>) -> Result<()> {
    if values.is_empty() {
        return Err(NflError::config(name, "must not be empty"));
    }
    let mut seen = HashSet::new();
    for &v in values {
        check(v).map_err(|reason| NflError::config(name, reason))?;
        if !seen.insert(v) {
            return Err(NflError::config(name, format!("duplicate value {v}")));
        }
    }
    Ok(())
}

/// Turns serde's message into a `ConfigInvalid` naming the key when possible.
fn field_error(e: serde_json::Error) -> NflError {
    let msg = e.to_string();
    let field = ["unknown field `", "missing field `"]
        .iter()
        .find_map(|prefix| {
            let start = msg.find(prefix)? + prefix.len();
            let len = msg[start..].find('`')?;
            Some(msg[start..start + len].to_string())
        })
        .unwrap_or_else(|| "<document>".to_string());
    NflError::config(field, msg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"d": 2, "r_values": [1, 2], "t_values": [1, 2], "master_seed": 7, "output_path": "out"}"#;

    #[test]
    fn defaults_fill_in() {
        let cfg = ExperimentConfig::from_json_str(MINIMAL, None).unwrap();
        assert_eq!(cfg.n_unitaries, 10);
        assert_eq!(cfg.n_sets, 10);
        assert_eq!(cfg.learner, LearnerMethod::Perfect);
        assert_eq!(cfg.set_style, SetStyle::Generic);
        assert_eq!(cfg.optimizer, OptimizerConfig::default());
        assert_eq!(cfg.grid_points(), vec![(1, 1), (1, 2), (2, 1)]);
    }

    #[test]
    fn larger_dimensions_default_to_a_hundred_sets() {
        let text = MINIMAL.replace("\"d\": 2", "\"d\": 64");
        assert_eq!(ExperimentConfig::from_json_str(&text, None).unwrap().n_sets, 100);
    }

    #[test]
    fn unknown_and_missing_keys_are_named() {
        let text = MINIMAL.replace("\"d\": 2", "\"d\": 2, \"colour\": 1");
        match ExperimentConfig::from_json_str(&text, None) {
            Err(NflError::ConfigInvalid { field, .. }) => assert_eq!(field, "colour"),
            other => panic!("unexpected {other:?}"),
        }
        let text = MINIMAL.replace("\"master_seed\": 7, ", "");
        match ExperimentConfig::from_json_str(&text, None) {
            Err(NflError::ConfigInvalid { field, .. }) => assert_eq!(field, "master_seed"),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(ExperimentConfig::from_json_str(&text, Some(9)).unwrap().master_seed, 9);
    }

    #[test]
    fn explicit_seed_beats_fallback() {
        assert_eq!(
            ExperimentConfig::from_json_str(MINIMAL, Some(9)).unwrap().master_seed,
            7
        );
    }

    #[test]
    fn field_level_validation() {
        let cases = [
            ("\"d\": 2", "\"d\": 1", "d"),
            ("[1, 2], \"t_", "[1, 3], \"t_", "r_values"),
            ("[1, 2], \"m", "[1, 1], \"m", "t_values"),
            ("\"d\": 2", "\"d\": 2, \"n_sets\": 0", "n_sets"),
            (
                "\"d\": 2",
                "\"d\": 2, \"learner\": \"variational_shots\"",
                "optimizer.shots",
            ),
            (
                "\"d\": 2",
                "\"d\": 2, \"optimizer\": {\"cost_tol\": 2.0}",
                "optimizer.cost_tol",
            ),
        ];
        for (from, to, expected) in cases {
            let text = MINIMAL.replace(from, to);
            match ExperimentConfig::from_json_str(&text, None) {
                Err(NflError::ConfigInvalid { field, .. }) => assert_eq!(field, expected, "{text}"),
                other => panic!("{text}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn orthonormal_overflow_points_are_skipped() {
        let text = MINIMAL.replace("\"d\": 2", "\"d\": 2, \"set_style\": \"orthonormal\"");
        let cfg = ExperimentConfig::from_json_str(&text, None).unwrap();
        assert!(cfg.grid_points().iter().all(|&(r, t)| r * t <= 2));
    }
}
