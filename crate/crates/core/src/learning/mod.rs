//! Hypothesis unitaries learned from entangled training sets, the training
//! cost and the risk.

mod cost;
mod perfect;
mod risk;
mod variational;

use serde::{Deserialize, Serialize};

use crate::error::{NflError, Result};
use crate::linalg::UnitaryOperator;

pub use cost::{cost, overlap_probabilities, sampled_cost};
pub use perfect::perfect_learner;
pub use risk::{risk, risk_monte_carlo};
pub use variational::{gell_mann_basis, variational_learner, variational_learner_traced, VariationalModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerMethod {
    Perfect,
    Variational,
    VariationalShots,
}

impl LearnerMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            LearnerMethod::Perfect => "perfect",
            LearnerMethod::Variational => "variational",
            LearnerMethod::VariationalShots => "variational_shots",
        }
    }
}

/// A learned hypothesis `V` with training diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisResult {
    pub v: UnitaryOperator,
    pub method: LearnerMethod,
    /// Exact training cost of `v`, in `[0, 1]`.
    pub final_cost: f64,
    pub iterations: usize,
    /// Phase `θ` of `W = U†V` on the span of the training inputs (perfect learner only).
    pub global_phase: f64,
    /// `d − span_dim`
    pub complement_dim: usize,
    /// False when the variational learner ended above `cost_tol`.
    pub converged: bool,
}

/// Settings for the variational learner.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub max_iters: usize,
    pub cost_tol: f64,
    pub learning_rate: f64,
    pub fd_step: f64,
    /// Measurement shots per cost evaluation; exact cost when absent.
    pub shots: Option<u64>,
    pub restarts: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_iters: 5000,
            cost_tol: 1e-6,
            learning_rate: 0.1,
            fd_step: 1e-5,
            shots: None,
            restarts: 3,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(NflError::config(format!("optimizer.{name}"), "must be positive"))
            }
        };
        positive("max_iters", self.max_iters > 0)?;
        positive("cost_tol", self.cost_tol > 0.0)?;
        positive(
            "learning_rate",
            self.learning_rate > 0.0 && self.learning_rate.is_finite(),
        )?;
        positive("fd_step", self.fd_step > 0.0 && self.fd_step.is_finite())?;
        positive("restarts", self.restarts > 0)?;
        positive("shots", self.shots != Some(0))?;
        if self.cost_tol.is_nan() || self.cost_tol >= 1.0 {
            return Err(NflError::config("optimizer.cost_tol", "must be below 1"));
        }
        Ok(())
    }
}

pub(crate) fn check_dims(v: &UnitaryOperator, d: usize) -> Result<()> {
    if v.dim() != d {
        return Err(NflError::DimensionMismatch(format!(
            "{}-dim hypothesis for a {d}-dim system",
            v.dim()
        )));
    }
    Ok(())
}
