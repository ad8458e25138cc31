use rand::distr::Distribution;
use rand_distr::Binomial;

use super::check_dims;
use crate::error::{NflError, Result};
use crate::linalg::{dotc, ComplexMatrix, UnitaryOperator};
use crate::sampling::{SeedSpec, TrainingSet};
use num_complex::Complex64;

/// `p_j = |⟨φ_j|(V ⊗ I)|ψ_j⟩|²` for every training pair.
pub fn overlap_probabilities(v: &UnitaryOperator, s: &TrainingSet) -> Result<Vec<f64>> {
    check_dims(v, s.d_x())?;
    if s.is_empty() {
        return Ok(Vec::new());
    }
    // (V ⊗ I) applied to all inputs with a single product.
    let inputs: Vec<&ComplexMatrix> = s.pairs().iter().map(|p| p.input.amplitude_matrix()).collect();
    let moved = v.matrix().matmul(&ComplexMatrix::hstack(&inputs)?);
    let d_r = s.d_r();
    Ok(s.pairs()
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let out = p.output.amplitude_matrix();
            let amp: Complex64 = (0..s.d_x())
                .map(|x| dotc(out.row(x), &moved.row(x)[j * d_r..(j + 1) * d_r]))
                .sum();
            amp.norm_sqr().min(1.0)
        })
        .collect())
}

/// Training cost `1 − (1/t) Σ_j p_j`; 0 for an empty set.
pub fn cost(v: &UnitaryOperator, s: &TrainingSet) -> Result<f64> {
    let p = overlap_probabilities(v, s)?;
    if p.is_empty() {
        return Ok(0.0);
    }
    let mean = p.iter().sum::<f64>() / p.len() as f64;
    Ok((1.0 - mean).clamp(0.0, 1.0))
}

/// Cost estimated from `shots` simulated measurements per pair, each
/// succeeding with probability `p_j`.
pub fn sampled_cost(v: &UnitaryOperator, s: &TrainingSet, shots: u64, seed: SeedSpec) -> Result<f64> {
    let p = overlap_probabilities(v, s)?;
    sampled_from_probabilities(&p, shots, &mut seed.rng())
}

pub(crate) fn sampled_from_probabilities<R: rand::Rng + ?Sized>(p: &[f64], shots: u64, rng: &mut R) -> Result<f64> {
    if shots == 0 {
        return Err(NflError::InvalidArgs("shots must be at least 1".into()));
    }
    if p.is_empty() {
        return Ok(0.0);
    }
    let mut hits = 0.0;
    for &pj in p {
        let dist = Binomial::new(shots, pj.clamp(0.0, 1.0)).map_err(|e| NflError::Numerical(e.to_string()))?;
        hits += dist.sample(rng) as f64 / shots as f64;
    }
    Ok(1.0 - hits / p.len() as f64)
}
