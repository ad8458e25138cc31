use num_complex::Complex64;
use rand::Rng;

use super::{check_dims, cost, HypothesisResult, LearnerMethod};
use crate::error::Result;
use crate::linalg::{complete_basis, ComplexMatrix, UnitaryOperator};
use crate::sampling::{haar_unitary_matrix_with, SeedSpec, TrainingSet};

/// Hypothesis `V = U W` that reproduces every training pair exactly.
///
/// `W` acts as `e^{iθ}` on the span of the inputs' Schmidt vectors, with `θ`
/// uniform in `[0, 2π)`, and as a Haar-random unitary `Y` on the orthogonal
/// complement.
pub fn perfect_learner(u: &UnitaryOperator, s: &TrainingSet, seed: SeedSpec) -> Result<HypothesisResult> {
    check_dims(u, s.d_x())?;
    let d = u.dim();
    let mut rng = seed.rng();
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    let phase = Complex64::from_polar(1.0, theta);

    let (basis, k) = (s.span_basis(), s.span_dim());

    let w = match basis {
        _ if k == d => ComplexMatrix::identity(d).scale(phase),
        None => haar_unitary_matrix_with(&mut rng, d),
        Some(b) => {
            let q = complete_basis(b);
            let y = haar_unitary_matrix_with(&mut rng, d - k);
            let q_rest = q.columns_range(k, d).matmul(&y);
            let qd = ComplexMatrix::from_fn(d, d, |i, j| if j < k { q[(i, j)] * phase } else { q_rest[(i, j - k)] });
            qd.matmul(&q.adjoint())
        }
    };

    let v = UnitaryOperator::from_unitary_product(u.matrix().matmul(&w));
    let final_cost = cost(&v, s)?;
    Ok(HypothesisResult {
        v,
        method: LearnerMethod::Perfect,
        final_cost,
        iterations: 0,
        global_phase: theta,
        complement_dim: d - k,
        converged: true,
    })
}
