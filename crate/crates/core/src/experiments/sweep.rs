use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ExperimentConfig;
use crate::bounds::{bound_curve, BoundCurve, BoundKind, McParams, DEFAULT_N_MATRICES};
use crate::error::{NflError, Result};
use crate::learning::{perfect_learner, risk, variational_learner, LearnerMethod};
use crate::linalg::UnitaryOperator;
use crate::sampling::{haar_unitary, training_set, SeedSpec};
use crate::stats::Summary;

const UNITARY_STREAMS: u64 = 1 << 62;
const TRIAL_STREAMS: u64 = 2 << 62;
const BISTOCHASTIC_STREAM: u64 = 3 << 62;

/// Risk statistics at one `(r, t)` grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiskStats {
    pub d: usize,
    pub r: usize,
    pub t: usize,
    pub n_unitaries: usize,
    pub n_sets: usize,
    pub mean_risk: f64,
    pub sample_std: f64,
    /// `sample_std / √(n_unitaries · n_sets)`
    pub stderr: f64,
    pub max_risk: f64,
    pub mean_final_cost: f64,
    /// Trials whose variational learner ended above `cost_tol`.
    pub non_converged: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config_echo: ExperimentConfig,
    pub grid: Vec<RiskStats>,
    pub curves: Vec<BoundCurve>,
    /// Not serialized, so identical configs give identical documents.
    #[serde(skip)]
    pub wall_time_seconds: f64,
    pub code_version: String,
}

/// Outcome of learning one training set for one target.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialOutcome {
    pub risk: f64,
    pub final_cost: f64,
    pub converged: bool,
}

/// Seed of the `j`-th target unitary; shared by every grid point.
pub fn unitary_seed(master_seed: u64, j: usize) -> SeedSpec {
    SeedSpec::new(master_seed, UNITARY_STREAMS | j as u64)
}

/// Seed of training set `k` for target `j` at grid point `(r, t)`.
pub fn trial_seed(master_seed: u64, r: usize, t: usize, j: usize, k: usize) -> SeedSpec {
    debug_assert!(r < 1 << 16 && t < 1 << 16 && j < 1 << 15 && k < 1 << 15);
    let index = TRIAL_STREAMS | (r as u64) << 46 | (t as u64) << 30 | (j as u64) << 15 | k as u64;
    SeedSpec::new(master_seed, index)
}

/// Samples a rank-`r` training set of size `t` for `u` (reference dimension
/// `r`), trains the configured learner on it and scores the hypothesis.
pub fn run_trial(
    cfg: &ExperimentConfig,
    u: &UnitaryOperator,
    r: usize,
    t: usize,
    seed: SeedSpec,
) -> Result<TrialOutcome> {
    let s = training_set(u, r, r, t, cfg.set_style, seed.child(0))?;
    let h = match cfg.learner {
        LearnerMethod::Perfect => perfect_learner(u, &s, seed.child(1))?,
        LearnerMethod::Variational | LearnerMethod::VariationalShots => {
            variational_learner(u, &s, &cfg.optimizer, seed.child(1))?
        }
    };
    Ok(TrialOutcome {
        risk: risk(u, &h.v)?,
        final_cost: h.final_cost,
        converged: h.converged,
    })
}

/// Target unitaries of a sweep, in order.
pub fn sweep_unitaries(cfg: &ExperimentConfig) -> Result<Vec<UnitaryOperator>> {
    (0..cfg.n_unitaries)
        .into_par_iter()
        .map(|j| haar_unitary(cfg.d, unitary_seed(cfg.master_seed, j)))
        .collect()
}

/// Runs every trial of the sweep and attaches the requested bound curves.
/// The result depends only on `cfg`, not on the number of worker threads.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let start = Instant::now();
    let points = cfg.grid_points();
    let unitaries = sweep_unitaries(cfg)?;
    let per_point = cfg.n_unitaries * cfg.n_sets;
    log::info!(
        "sweep: d={} with {} grid points x {} trials",
        cfg.d,
        points.len(),
        per_point
    );

    let outcomes: Vec<TrialOutcome> = (0..points.len() * per_point)
        .into_par_iter()
        .map(|i| {
            let (r, t) = points[i / per_point];
            let j = (i % per_point) / cfg.n_sets;
            let k = i % cfg.n_sets;
            run_trial(cfg, &unitaries[j], r, t, trial_seed(cfg.master_seed, r, t, j, k))
        })
        .collect::<Result<_>>()?;

    let grid = points
        .iter()
        .zip(outcomes.chunks(per_point.max(1)))
        .map(|(&(r, t), trials)| aggregate(cfg, r, t, trials))
        .collect();

    Ok(ExperimentResult {
        config_echo: cfg.clone(),
        grid,
        curves: sweep_curves(cfg)?,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

fn aggregate(cfg: &ExperimentConfig, r: usize, t: usize, trials: &[TrialOutcome]) -> RiskStats {
    let risks: Vec<f64> = trials.iter().map(|o| o.risk).collect();
    let costs: Vec<f64> = trials.iter().map(|o| o.final_cost).collect();
    let s = Summary::of(&risks);
    RiskStats {
        d: cfg.d,
        r,
        t,
        n_unitaries: cfg.n_unitaries,
        n_sets: cfg.n_sets,
        mean_risk: s.mean,
        sample_std: s.sample_std,
        stderr: s.stderr,
        max_risk: risks.iter().copied().fold(0.0, f64::max),
        mean_final_cost: Summary::of(&costs).mean,
        non_converged: trials.iter().filter(|o| !o.converged).count(),
    }
}

fn sweep_curves(cfg: &ExperimentConfig) -> Result<Vec<BoundCurve>> {
    let classical_ts: Vec<usize> = cfg.t_values.iter().copied().filter(|&t| t <= cfg.d).collect();
    let mut curves = Vec::new();
    for &kind in &cfg.bounds_requested {
        match kind {
            BoundKind::QuantumNfl => {
                for &r in &cfg.r_values {
                    curves.push(bound_curve(kind, cfg.d, r, &cfg.t_values, None)?);
                }
            }
            BoundKind::ClassicalBistochasticMc => curves.push(run_classical_mc(
                kind,
                cfg.d,
                &classical_ts,
                DEFAULT_N_MATRICES,
                SeedSpec::new(cfg.master_seed, BISTOCHASTIC_STREAM),
            )?),
            _ => curves.push(bound_curve(kind, cfg.d, 1, &classical_ts, None)?),
        }
    }
    Ok(curves)
}

/// Monte Carlo bound curve with one value and standard error per `t`.
pub fn run_classical_mc(
    kind: BoundKind,
    d: usize,
    t_values: &[usize],
    n_matrices: usize,
    seed: SeedSpec,
) -> Result<BoundCurve> {
    if kind != BoundKind::ClassicalBistochasticMc {
        return Err(NflError::InvalidArgs(format!(
            "{kind} has a closed form; only classical_bistochastic_mc is sampled"
        )));
    }
    bound_curve(kind, d, 1, t_values, Some(McParams { n_matrices, seed }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::quantum_nfl_bound;

    fn config(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_json_str(text, None).unwrap()
    }

    #[test]
    fn qubit_sweep_matches_the_bound() {
        let cfg = config(
            r#"{"d": 2, "r_values": [1, 2], "t_values": [1, 2], "master_seed": 3,
                "output_path": "x", "bounds_requested": ["quantum_nfl"]}"#,
        );
        let res = run_sweep(&cfg).unwrap();
        assert_eq!(res.grid.len(), 3);
        for g in &res.grid {
            let bound = quantum_nfl_bound(2, g.r, g.t).unwrap();
            assert!((g.mean_risk - bound).abs() <= 3.0 * g.stderr + 1e-10, "{g:?}");
        }
        assert_eq!(res.curves.len(), 2);
    }

    #[test]
    fn single_full_rank_trial() {
        let cfg = config(
            r#"{"d": 4, "r_values": [2], "t_values": [2], "n_unitaries": 1, "n_sets": 1,
                "master_seed": 1, "output_path": "x"}"#,
        );
        let g = &run_sweep(&cfg).unwrap().grid[0];
        assert!(g.mean_risk <= 1e-10);
        assert_eq!(g.sample_std, 0.0);
    }

    #[test]
    fn sweep_is_independent_of_thread_count() {
        let cfg = config(
            r#"{"d": 4, "r_values": [1, 2], "t_values": [0, 1, 2], "n_unitaries": 3, "n_sets": 4,
                "master_seed": 11, "output_path": "x",
                "bounds_requested": ["quantum_nfl", "classical_bistochastic_mc"]}"#,
        );
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_sweep(&cfg).unwrap())
        };
        let (a, b) = (run(1), run(3));
        assert_eq!(a.grid, b.grid);
        assert_eq!(a.curves, b.curves);
    }

    #[test]
    fn more_sets_leave_the_targets_alone() {
        let small =
            config(r#"{"d": 3, "r_values": [1], "t_values": [1], "n_sets": 2, "master_seed": 5, "output_path": "x"}"#);
        let mut large = small.clone();
        large.n_sets = 5;
        assert_eq!(sweep_unitaries(&small).unwrap(), sweep_unitaries(&large).unwrap());
        // The first trials of each target coincide as well.
        let u = &sweep_unitaries(&small).unwrap()[1];
        let seed = trial_seed(5, 1, 1, 1, 0);
        assert_eq!(
            run_trial(&small, u, 1, 1, seed).unwrap(),
            run_trial(&large, u, 1, 1, seed).unwrap()
        );
    }

    #[test]
    fn classical_mc_rejects_closed_form_kinds() {
        assert!(run_classical_mc(BoundKind::ClassicalStochastic, 4, &[0], 10, SeedSpec::new(0, 0)).is_err());
        let c = run_classical_mc(BoundKind::ClassicalBistochasticMc, 2, &[1], 10, SeedSpec::new(0, 0)).unwrap();
        assert!(c.points[0].value.abs() <= 1e-12);
    }
}
