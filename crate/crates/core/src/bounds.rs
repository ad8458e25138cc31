//! Quantum and classical no-free-lunch bounds and the entanglement rank
//! needed to beat each classical bound.

use std::f64::consts::E;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{NflError, Result};
use crate::sampling::{chunked_samples, haar_state_with, random_bistochastic, SeedSpec};
use crate::stats::Summary;

/// `e²`, the normalization that maps Haar-state column averages onto the
/// stochastic prefactor.
const E2: f64 = E * E;

/// Dimensions up to which [`stochastic_f`] uses the direct formula.
pub const STOCHASTIC_F_DIRECT_MAX_D: usize = 20;

/// Matrices averaged by the bistochastic Monte Carlo bound by default.
pub const DEFAULT_N_MATRICES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    QuantumNfl,
    ClassicalDeterministic,
    ClassicalPermutation,
    ClassicalStochastic,
    ClassicalBistochasticAnalytic,
    ClassicalBistochasticMc,
}

impl BoundKind {
    pub const ALL: [BoundKind; 6] = [
        BoundKind::QuantumNfl,
        BoundKind::ClassicalDeterministic,
        BoundKind::ClassicalPermutation,
        BoundKind::ClassicalStochastic,
        BoundKind::ClassicalBistochasticAnalytic,
        BoundKind::ClassicalBistochasticMc,
    ];

    /// Every kind with a closed form.
    pub const CLOSED_FORM: [BoundKind; 5] = [
        BoundKind::QuantumNfl,
        BoundKind::ClassicalDeterministic,
        BoundKind::ClassicalPermutation,
        BoundKind::ClassicalStochastic,
        BoundKind::ClassicalBistochasticAnalytic,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::QuantumNfl => "quantum_nfl",
            BoundKind::ClassicalDeterministic => "classical_deterministic",
            BoundKind::ClassicalPermutation => "classical_permutation",
            BoundKind::ClassicalStochastic => "classical_stochastic",
            BoundKind::ClassicalBistochasticAnalytic => "classical_bistochastic_analytic",
            BoundKind::ClassicalBistochasticMc => "classical_bistochastic_mc",
        }
    }

    pub fn is_classical(&self) -> bool {
        *self != BoundKind::QuantumNfl
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for BoundKind {
    type Err = NflError;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| NflError::InvalidArgs(format!("unknown bound kind `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundPoint {
    pub t: usize,
    pub value: f64,
}

/// A bound evaluated over a list of training-set sizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub kind: BoundKind,
    pub d: usize,
    /// Schmidt rank for the quantum bound, 1 otherwise.
    pub r: usize,
    pub points: Vec<BoundPoint>,
    /// Monte Carlo standard error per point, for sampled kinds.
    pub mc_stderr: Option<Vec<f64>>,
}

/// Sample size and seed for Monte Carlo bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McParams {
    pub n_matrices: usize,
    pub seed: SeedSpec,
}

impl Default for McParams {
    fn default() -> Self {
        Self {
            n_matrices: DEFAULT_N_MATRICES,
            seed: SeedSpec::new(0, 0),
        }
    }
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(NflError::InvalidArgs(format!("dimension must be at least 2, got {d}")));
    }
    Ok(())
}

fn check_t(d: usize, t: usize) -> Result<()> {
    check_d(d)?;
    if t > d {
        return Err(NflError::InvalidArgs(format!("t = {t} exceeds d = {d}")));
    }
    Ok(())
}

/// `max(0, 1 − (r²t² + d + 1)/(d(d+1)))`
pub fn quantum_nfl_bound(d: usize, r: usize, t: usize) -> Result<f64> {
    check_d(d)?;
    if r == 0 || r > d {
        return Err(NflError::InvalidArgs(format!("rank r = {r} outside 1..={d}")));
    }
    let (d, rt) = (d as f64, (r * t) as f64);
    Ok((1.0 - (rt * rt + d + 1.0) / (d * (d + 1.0))).max(0.0))
}

/// Standard deviation of the risk over targets and training sets:
/// `√(2r²t² + 1)/(d(d+1))` when `r t < d`, else 0.
pub fn quantum_risk_std(d: usize, r: usize, t: usize) -> Result<f64> {
    quantum_nfl_bound(d, r, t)?;
    if r * t >= d {
        return Ok(0.0);
    }
    let (d, rt) = (d as f64, (r * t) as f64);
    Ok((2.0 * rt * rt + 1.0).sqrt() / (d * (d + 1.0)))
}

/// `(1 − t/d)(1 − 1/d)`
pub fn classical_deterministic_bound(d: usize, t: usize) -> Result<f64> {
    check_t(d, t)?;
    let (d, t) = (d as f64, t as f64);
    Ok((1.0 - t / d) * (1.0 - 1.0 / d))
}

/// `max(0, 1 − (t+1)/d)`
pub fn classical_permutation_bound(d: usize, t: usize) -> Result<f64> {
    check_t(d, t)?;
    Ok((1.0 - (t + 1) as f64 / d as f64).max(0.0))
}

/// `F(d) = e²(d−1)/((d+1) d^{d+1}) · ((d−2)^{d+1} + 2(d−1)^d)` by direct
/// evaluation.
pub fn stochastic_f_direct(d: usize) -> Result<f64> {
    check_d(d)?;
    let n = d as i32;
    let df = d as f64;
    let bracket = (df - 2.0).powi(n + 1) + 2.0 * (df - 1.0).powi(n);
    Ok(E2 * (df - 1.0) / ((df + 1.0) * df.powi(n + 1)) * bracket)
}

/// The same `F(d)` accumulated in log space, stable for large `d`.
pub fn stochastic_f_log(d: usize) -> Result<f64> {
    check_d(d)?;
    let df = d as f64;
    let a = if d == 2 {
        f64::NEG_INFINITY
    } else {
        (df + 1.0) * (df - 2.0).ln()
    };
    let b = std::f64::consts::LN_2 + df * (df - 1.0).ln();
    let hi = a.max(b);
    let log_bracket = hi + ((a - hi).exp() + (b - hi).exp()).ln();
    let log_f = 2.0 + (df - 1.0).ln() - (df + 1.0).ln() - (df + 1.0) * df.ln() + log_bracket;
    Ok(log_f.exp())
}

/// Stochastic prefactor `F(d)`: direct formula up to
/// [`STOCHASTIC_F_DIRECT_MAX_D`], log space beyond.
pub fn stochastic_f(d: usize) -> Result<f64> {
    if d <= STOCHASTIC_F_DIRECT_MAX_D {
        stochastic_f_direct(d)
    } else {
        stochastic_f_log(d)
    }
}

/// `e² · E(½‖p − 1/d‖₁)²` with `p` the outcome distribution of a Haar
/// state, estimated from `samples` draws. Returns `(estimate, stderr)`.
pub fn stochastic_f_monte_carlo(d: usize, samples: usize, seed: SeedSpec) -> Result<(f64, f64)> {
    check_d(d)?;
    if samples < 2 {
        return Err(NflError::InvalidArgs("need at least two samples".into()));
    }
    let uniform = 1.0 / d as f64;
    let values = chunked_samples(samples, seed, |rng| {
        let half_l1: f64 = haar_state_with(rng, d)
            .iter()
            .map(|z| (z.norm_sqr() - uniform).abs())
            .sum::<f64>()
            / 2.0;
        half_l1 * half_l1
    });
    let s = Summary::of(&values);
    Ok((E2 * s.mean, E2 * s.stderr))
}

/// `(1 − t/d) F(d)`
pub fn classical_stochastic_bound(d: usize, t: usize) -> Result<f64> {
    check_t(d, t)?;
    Ok((1.0 - t as f64 / d as f64) * stochastic_f(d)?)
}

/// `max(0, (1 − (t+1)/d)/(1 + d))`
pub fn bistochastic_analytic_bound(d: usize, t: usize) -> Result<f64> {
    check_t(d, t)?;
    let df = d as f64;
    Ok(((1.0 - (t + 1) as f64 / df) / (1.0 + df)).max(0.0))
}

/// Per-matrix mean of `(½‖col_x − h‖₁)²` over the unknown columns `x ≥ t`,
/// with `h = (𝟙 − Σ_{i<t} col_i)/(d − t)`, for every `t` in `ts` (`t < d`).
fn bistochastic_column_errors(d: usize, ts: &[usize], seed: SeedSpec) -> Result<Vec<f64>> {
    let b = random_bistochastic(d, seed)?;
    let cols: Vec<Vec<f64>> = (0..d).map(|j| b.column(j)).collect();
    Ok(ts
        .iter()
        .map(|&t| {
            let known: Vec<f64> = (0..d).map(|i| cols[..t].iter().map(|c| c[i]).sum()).collect();
            let h: Vec<f64> = known.iter().map(|k| (1.0 - k) / (d - t) as f64).collect();
            let total: f64 = cols[t..]
                .iter()
                .map(|c| {
                    let half_l1 = c.iter().zip(&h).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0;
                    half_l1 * half_l1
                })
                .sum();
            total / (d - t) as f64
        })
        .collect())
}

/// Bistochastic bound `(1 − t/d) · e² · mean` over `n_matrices` random
/// bistochastic matrices, each learned from its first `t` columns with the
/// optimal hypothesis. Returns `(value, stderr)`.
pub fn bistochastic_mc_bound(d: usize, t: usize, n_matrices: usize, seed: SeedSpec) -> Result<(f64, f64)> {
    check_d(d)?;
    if t >= d {
        return Err(NflError::DegenerateSplit { d, t });
    }
    let curve = bistochastic_mc_values(d, &[t], n_matrices, seed)?;
    Ok(curve[0])
}

/// [`bistochastic_mc_bound`] for several `t` with shared matrices, so the
/// curve has no independent noise between points. `t = d` gives exactly 0.
pub fn bistochastic_mc_values(d: usize, ts: &[usize], n_matrices: usize, seed: SeedSpec) -> Result<Vec<(f64, f64)>> {
    check_d(d)?;
    if n_matrices == 0 {
        return Err(NflError::InvalidArgs("need at least one matrix".into()));
    }
    if let Some(&t) = ts.iter().find(|&&t| t > d) {
        return Err(NflError::DegenerateSplit { d, t });
    }
    let inner: Vec<usize> = ts.iter().copied().filter(|&t| t < d).collect();
    let per_matrix: Vec<Vec<f64>> = (0..n_matrices as u64)
        .into_par_iter()
        .map(|m| bistochastic_column_errors(d, &inner, seed.child(m)))
        .collect::<Result<_>>()?;

    let mut summaries = inner.iter().enumerate().map(|(i, &t)| {
        let values: Vec<f64> = per_matrix.iter().map(|row| row[i]).collect();
        let s = Summary::of(&values);
        let scale = (1.0 - t as f64 / d as f64) * E2;
        (scale * s.mean, scale * s.stderr)
    });
    Ok(ts
        .iter()
        .map(|&t| {
            if t == d {
                (0.0, 0.0)
            } else {
                summaries.next().expect("one summary per t < d")
            }
        })
        .collect())
}

/// Closed-form value of a bound kind. Monte Carlo kinds are rejected.
pub fn bound_value(kind: BoundKind, d: usize, r: usize, t: usize) -> Result<f64> {
    match kind {
        BoundKind::QuantumNfl => quantum_nfl_bound(d, r, t),
        BoundKind::ClassicalDeterministic => classical_deterministic_bound(d, t),
        BoundKind::ClassicalPermutation => classical_permutation_bound(d, t),
        BoundKind::ClassicalStochastic => classical_stochastic_bound(d, t),
        BoundKind::ClassicalBistochasticAnalytic => bistochastic_analytic_bound(d, t),
        BoundKind::ClassicalBistochasticMc => Err(NflError::InvalidArgs(
            "the bistochastic Monte Carlo bound has no closed form".into(),
        )),
    }
}

/// Evaluates `kind` at every `t` in `ts`; `mc` is used by the Monte Carlo kind.
pub fn bound_curve(kind: BoundKind, d: usize, r: usize, ts: &[usize], mc: Option<McParams>) -> Result<BoundCurve> {
    let r = if kind == BoundKind::QuantumNfl { r } else { 1 };
    if kind == BoundKind::ClassicalBistochasticMc {
        let mc = mc.unwrap_or_default();
        let values = bistochastic_mc_values(d, ts, mc.n_matrices, mc.seed)?;
        return Ok(BoundCurve {
            kind,
            d,
            r,
            points: ts
                .iter()
                .zip(&values)
                .map(|(&t, v)| BoundPoint { t, value: v.0 })
                .collect(),
            mc_stderr: Some(values.iter().map(|v| v.1).collect()),
        });
    }
    let points = ts
        .iter()
        .map(|&t| {
            Ok(BoundPoint {
                t,
                value: bound_value(kind, d, r, t)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(BoundCurve {
        kind,
        d,
        r,
        points,
        mc_stderr: None,
    })
}

/// Smallest real Schmidt rank at which the quantum bound drops to the
/// classical bound of `kind`, clamped below at 1. Returns 1 for `t > d`,
/// where every classical bound has reached 0.
pub fn rank_threshold(kind: BoundKind, d: usize, t: usize, mc: Option<McParams>) -> Result<f64> {
    check_d(d)?;
    if t == 0 {
        return Err(NflError::InvalidArgs("rank threshold needs t ≥ 1".into()));
    }
    if t > d {
        return Ok(1.0);
    }
    let (df, tf) = (d as f64, t as f64);
    let r2 = match kind {
        BoundKind::QuantumNfl => return Err(NflError::InvalidArgs("rank threshold needs a classical bound".into())),
        BoundKind::ClassicalPermutation => (df + 1.0) / tf,
        BoundKind::ClassicalDeterministic => (df * df - 1.0) / (df * tf),
        BoundKind::ClassicalBistochasticMc => {
            let mc = mc.unwrap_or_default();
            let value = bistochastic_mc_values(d, &[t], mc.n_matrices, mc.seed)?[0].0;
            rank_squared_for(df, tf, value)
        }
        BoundKind::ClassicalStochastic | BoundKind::ClassicalBistochasticAnalytic => {
            rank_squared_for(df, tf, bound_value(kind, d, 1, t)?)
        }
    };
    Ok(r2.max(0.0).sqrt().max(1.0))
}

/// `r²` solving `1 − (r²t² + d + 1)/(d(d+1)) = classical`.
fn rank_squared_for(d: f64, t: f64, classical: f64) -> f64 {
    (d * (d + 1.0) * (1.0 - classical) - (d + 1.0)) / (t * t)
}

/// Rank thresholds for `kind` at `t = 1..=t_max`. The Monte Carlo kind
/// reuses one matrix ensemble for every `t`.
pub fn rank_threshold_curve(
    kind: BoundKind,
    d: usize,
    t_max: usize,
    mc: Option<McParams>,
) -> Result<Vec<(usize, f64)>> {
    let ts: Vec<usize> = (1..=t_max).collect();
    if kind != BoundKind::ClassicalBistochasticMc {
        return ts.iter().map(|&t| Ok((t, rank_threshold(kind, d, t, mc)?))).collect();
    }
    check_d(d)?;
    let mc = mc.unwrap_or_default();
    let inside: Vec<usize> = ts.iter().copied().filter(|&t| t <= d).collect();
    let values = bistochastic_mc_values(d, &inside, mc.n_matrices, mc.seed)?;
    Ok(ts
        .iter()
        .map(|&t| {
            let r = if t > d {
                1.0
            } else {
                rank_squared_for(d as f64, t as f64, values[t - 1].0)
                    .max(0.0)
                    .sqrt()
                    .max(1.0)
            };
            (t, r)
        })
        .collect())
}
