use super::check_dims;
use crate::error::{NflError, Result};
use crate::linalg::UnitaryOperator;
use crate::sampling::{chunked_samples, haar_state_with, SeedSpec};
use crate::stats::Summary;

/// `1 − (d + |Tr U†V|²) / (d(d+1))`, clamped at 0.
pub fn risk(u: &UnitaryOperator, v: &UnitaryOperator) -> Result<f64> {
    check_dims(v, u.dim())?;
    let d = u.dim() as f64;
    let overlap = u.matrix().inner(v.matrix()).norm_sqr();
    Ok((1.0 - (d + overlap) / (d * (d + 1.0))).max(0.0))
}

/// Mean and standard error of `1 − |⟨x|U†V|x⟩|²` over `n` Haar-random
/// inputs `|x⟩`, the squared trace distance between the two outputs.
pub fn risk_monte_carlo(u: &UnitaryOperator, v: &UnitaryOperator, n: usize, seed: SeedSpec) -> Result<(f64, f64)> {
    check_dims(v, u.dim())?;
    if n == 0 {
        return Err(NflError::InvalidArgs("need at least one sample".into()));
    }
    let d = u.dim();
    let w = u.matrix().adjoint_matmul(v.matrix());
    let values = chunked_samples(n, seed, |rng| {
        let x = haar_state_with(rng, d);
        let wx = w.matvec(&x);
        let amp: num_complex::Complex64 = x.iter().zip(&wx).map(|(a, b)| a.conj() * b).sum();
        (1.0 - amp.norm_sqr()).max(0.0)
    });
    let s = Summary::of(&values);
    Ok((s.mean, s.stderr))
}
