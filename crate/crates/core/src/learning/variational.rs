use nalgebra::linalg::Schur;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::cost::sampled_from_probabilities;
use super::{check_dims, HypothesisResult, LearnerMethod, OptimizerConfig};
use crate::error::{NflError, Result};
use crate::linalg::{expm_hermitian, ComplexMatrix, HermitianMatrix, UnitaryOperator};
use crate::sampling::{haar_unitary_matrix_with, SeedSpec, TrainingSet};

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;
/// Iterations without a new best cost before the step size is halved.
const PATIENCE: usize = 20;
const MIN_LR_FRACTION: f64 = 1e-6;

const SPSA_ALPHA: f64 = 0.602;
const SPSA_GAMMA: f64 = 0.101;
const SPSA_C: f64 = 0.2;

/// Generalized Gell-Mann matrices plus `√(2/d)·I`, every element normalized
/// to `Tr G² = 2`, in parameter order: identity, then a symmetric and an
/// antisymmetric element per pair `j < l`, then the `d − 1` diagonal ones.
pub fn gell_mann_basis(d: usize) -> Vec<HermitianMatrix> {
    (0..d * d)
        .map(|k| {
            let mut theta = vec![0.0; d * d];
            theta[k] = 1.0;
            HermitianMatrix::new(generator(d, &theta)).expect("basis elements are Hermitian")
        })
        .collect()
}

/// `H(θ) = Σ_k θ_k G_k`, filled in directly.
fn generator(d: usize, theta: &[f64]) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(d, d);
    let id = theta[0] * (2.0 / d as f64).sqrt();
    for i in 0..d {
        h[(i, i)] += id;
    }
    let mut k = 1;
    for j in 0..d {
        for l in j + 1..d {
            let (s, a) = (theta[k], theta[k + 1]);
            h[(j, l)] += Complex64::new(s, -a);
            h[(l, j)] += Complex64::new(s, a);
            k += 2;
        }
    }
    for m in 1..d {
        let c = theta[k] * (2.0 / (m * (m + 1)) as f64).sqrt();
        for j in 0..m {
            h[(j, j)] += c;
        }
        h[(m, m)] -= c * m as f64;
        k += 1;
    }
    h
}

/// Coordinates of a Hermitian matrix in the [`gell_mann_basis`].
fn coordinates(h: &ComplexMatrix) -> Vec<f64> {
    let d = h.rows();
    let mut theta = Vec::with_capacity(d * d);
    theta.push(h.trace().re * (2.0 / d as f64).sqrt() / 2.0);
    for j in 0..d {
        for l in j + 1..d {
            theta.push(h[(j, l)].re);
            theta.push(-h[(j, l)].im);
        }
    }
    for m in 1..d {
        let c = (2.0 / (m * (m + 1)) as f64).sqrt();
        let s: f64 = (0..m).map(|j| h[(j, j)].re).sum::<f64>() - m as f64 * h[(m, m)].re;
        theta.push(c * s / 2.0);
    }
    theta
}

/// The map `θ ↦ V(θ) = exp(i H(θ))` and its training cost for a fixed set.
pub struct VariationalModel<'a> {
    d: usize,
    set: &'a TrainingSet,
}

impl<'a> VariationalModel<'a> {
    pub fn new(set: &'a TrainingSet) -> Self {
        Self { d: set.d_x(), set }
    }

    pub fn num_params(&self) -> usize {
        self.d * self.d
    }

    pub fn unitary(&self, theta: &[f64]) -> Result<UnitaryOperator> {
        if theta.len() != self.num_params() {
            return Err(NflError::DimensionMismatch(format!(
                "{} parameters for {} generators",
                theta.len(),
                self.num_params()
            )));
        }
        expm_hermitian(&HermitianMatrix::new(generator(self.d, theta))?, 1.0)
    }

    pub fn probabilities(&self, theta: &[f64]) -> Result<Vec<f64>> {
        super::overlap_probabilities(&self.unitary(theta)?, self.set)
    }

    pub fn cost(&self, theta: &[f64]) -> Result<f64> {
        super::cost(&self.unitary(theta)?, self.set)
    }

    /// Central finite-difference gradient of the exact cost.
    pub fn gradient(&self, theta: &[f64], step: f64) -> Result<Vec<f64>> {
        let mut probe = theta.to_vec();
        let mut grad = Vec::with_capacity(theta.len());
        for k in 0..theta.len() {
            probe[k] = theta[k] + step;
            let up = self.cost(&probe)?;
            probe[k] = theta[k] - step;
            let down = self.cost(&probe)?;
            probe[k] = theta[k];
            grad.push((up - down) / (2.0 * step));
        }
        Ok(grad)
    }

    /// Parameters of a Haar-random unitary, recovered through its Schur
    /// form. Falls back to uniform angles if the logarithm is inaccurate.
    fn haar_start(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let v0 = haar_unitary_matrix_with(rng, self.d);
        if let Some(theta) = self.logarithm(&v0) {
            return theta;
        }
        (0..self.num_params())
            .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
            .collect()
    }

    fn logarithm(&self, v: &ComplexMatrix) -> Option<Vec<f64>> {
        let (q, t) = Schur::try_new(v.to_nalgebra(), f64::EPSILON, 1000)?.unpack();
        let d = self.d;
        let q = ComplexMatrix::from_nalgebra(&q);
        let scaled = ComplexMatrix::from_fn(d, d, |i, j| q[(i, j)] * t[(j, j)].arg());
        let h = scaled.matmul(&q.adjoint());
        let theta = coordinates(&h);
        let back = self.unitary(&theta).ok()?;
        (back.matrix().sub(v).max_abs() < 1e-8).then_some(theta)
    }
}

struct RestartOutcome {
    theta: Vec<f64>,
    /// Exact cost, or a fresh shot-noise estimate when shots are set.
    score: f64,
    iterations: usize,
    trace: Vec<f64>,
}

fn adam_restart(model: &VariationalModel, cfg: &OptimizerConfig, rng: &mut ChaCha8Rng) -> Result<RestartOutcome> {
    let mut theta = model.haar_start(rng);
    let n = theta.len();
    let (mut m, mut v) = (vec![0.0; n], vec![0.0; n]);
    let mut step_count = 0i32;
    let mut lr = cfg.learning_rate;
    let mut best = model.cost(&theta)?;
    let mut best_theta = theta.clone();
    let mut trace = vec![best];
    let mut stale = 0;
    let mut iterations = 0;

    while iterations < cfg.max_iters && best > cfg.cost_tol {
        iterations += 1;
        step_count += 1;
        let g = model.gradient(&theta, cfg.fd_step)?;
        let (c1, c2) = (1.0 - BETA1.powi(step_count), 1.0 - BETA2.powi(step_count));
        for k in 0..n {
            m[k] = BETA1 * m[k] + (1.0 - BETA1) * g[k];
            v[k] = BETA2 * v[k] + (1.0 - BETA2) * g[k] * g[k];
            theta[k] -= lr * (m[k] / c1) / ((v[k] / c2).sqrt() + ADAM_EPS);
        }
        let c = model.cost(&theta)?;
        if c < best {
            best = c;
            best_theta.clone_from(&theta);
            stale = 0;
        } else {
            stale += 1;
        }
        if stale >= PATIENCE && lr > cfg.learning_rate * MIN_LR_FRACTION {
            // Restart the moments from the best point with a smaller step.
            lr *= 0.5;
            theta.clone_from(&best_theta);
            m.iter_mut().chain(v.iter_mut()).for_each(|x| *x = 0.0);
            step_count = 0;
            stale = 0;
        }
        trace.push(best);
    }
    Ok(RestartOutcome {
        theta: best_theta,
        score: best,
        iterations,
        trace,
    })
}

fn spsa_restart(
    model: &VariationalModel,
    cfg: &OptimizerConfig,
    shots: u64,
    rng: &mut ChaCha8Rng,
) -> Result<RestartOutcome> {
    let mut theta = model.haar_start(rng);
    let n = theta.len();
    let big_a = cfg.max_iters as f64 / 10.0;
    let a = cfg.learning_rate * (big_a + 1.0).powf(SPSA_ALPHA);
    let mut best = f64::INFINITY;
    let mut trace = Vec::with_capacity(cfg.max_iters);
    let mut probe = vec![0.0; n];

    for k in 0..cfg.max_iters {
        let ak = a / (k as f64 + 1.0 + big_a).powf(SPSA_ALPHA);
        let ck = SPSA_C / (k as f64 + 1.0).powf(SPSA_GAMMA);
        let delta: Vec<f64> = (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
        for i in 0..n {
            probe[i] = theta[i] + ck * delta[i];
        }
        let up = sampled_from_probabilities(&model.probabilities(&probe)?, shots, rng)?;
        for i in 0..n {
            probe[i] = theta[i] - ck * delta[i];
        }
        let down = sampled_from_probabilities(&model.probabilities(&probe)?, shots, rng)?;
        let diff = (up - down) / (2.0 * ck);
        for i in 0..n {
            theta[i] -= ak * diff / delta[i];
        }
        best = best.min(up.min(down));
        trace.push(best);
    }
    let score = sampled_from_probabilities(&model.probabilities(&theta)?, shots, rng)?;
    Ok(RestartOutcome {
        theta,
        score,
        iterations: cfg.max_iters,
        trace,
    })
}

/// [`variational_learner`] that also returns the best-so-far cost after
/// every iteration of every restart that ran.
pub fn variational_learner_traced(
    u: &UnitaryOperator,
    s: &TrainingSet,
    cfg: &OptimizerConfig,
    seed: SeedSpec,
) -> Result<(HypothesisResult, Vec<Vec<f64>>)> {
    check_dims(u, s.d_x())?;
    cfg.validate()?;
    let model = VariationalModel::new(s);
    let method = if cfg.shots.is_some() {
        LearnerMethod::VariationalShots
    } else {
        LearnerMethod::Variational
    };

    let mut traces = Vec::new();
    let mut best: Option<RestartOutcome> = None;
    if s.is_empty() {
        let theta = model.haar_start(&mut seed.child(0).rng());
        best = Some(RestartOutcome {
            theta,
            score: 0.0,
            iterations: 0,
            trace: Vec::new(),
        });
    } else {
        for restart in 0..cfg.restarts {
            let mut rng = seed.child(restart as u64).rng();
            let mut out = match cfg.shots {
                None => adam_restart(&model, cfg, &mut rng)?,
                Some(shots) => spsa_restart(&model, cfg, shots, &mut rng)?,
            };
            traces.push(std::mem::take(&mut out.trace));
            if best.as_ref().is_none_or(|b| out.score < b.score) {
                best = Some(out);
            }
            if cfg.shots.is_none() && best.as_ref().is_some_and(|b| b.score <= cfg.cost_tol) {
                break;
            }
        }
    }

    let best = best.expect("at least one restart runs");
    let v = model.unitary(&best.theta)?;
    let final_cost = super::cost(&v, s)?;
    let phase_sum: Complex64 = s
        .pairs()
        .iter()
        .map(|p| {
            p.output
                .amplitude_matrix()
                .inner(&v.matrix().matmul(p.input.amplitude_matrix()))
        })
        .sum();
    let result = HypothesisResult {
        method,
        final_cost,
        iterations: best.iterations,
        global_phase: if s.is_empty() { 0.0 } else { phase_sum.arg() },
        complement_dim: s.d_x() - s.span_dim(),
        converged: best.score <= cfg.cost_tol,
        v,
    };
    Ok((result, traces))
}

/// Minimizes the training cost over `V = exp(i Σ θ_k G_k)` from Haar-random
/// starting points, keeping the best of `cfg.restarts` runs.
///
/// Exact cost uses Adam on central finite differences with the step size
/// halved whenever progress stalls; with `cfg.shots` set the cost is
/// estimated from binomial shot noise and minimized by SPSA. `final_cost`
/// is always the exact cost of the returned `V`.
pub fn variational_learner(
    u: &UnitaryOperator,
    s: &TrainingSet,
    cfg: &OptimizerConfig,
    seed: SeedSpec,
) -> Result<HypothesisResult> {
    Ok(variational_learner_traced(u, s, cfg, seed)?.0)
}
