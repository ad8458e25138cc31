use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::haar::haar_unitary_matrix_with;
use super::SeedSpec;
use crate::error::{NflError, Result};
use crate::stats::Summary;

/// Samples drawn per independent stream in parallel Monte Carlo loops.
pub(crate) const CHUNK: usize = 1000;

/// Empirical Haar moment compared with its exact value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub name: String,
    pub exact: f64,
    pub mean: f64,
    pub stderr: f64,
    pub z: f64,
}

/// Runs `f` on `n` samples split into fixed-size chunks, chunk `c` drawing
/// from `seed.child(c)`. Output order and values do not depend on the number
/// of worker threads.
pub(crate) fn chunked_samples<T, F>(n: usize, seed: SeedSpec, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> T + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = seed.child(c as u64).rng();
            let len = CHUNK.min(n - c * CHUNK);
            (0..len).map(|_| f(&mut rng)).collect::<Vec<T>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Traces of `samples` independent Haar unitaries on `C^d`.
pub fn haar_traces(d: usize, samples: usize, seed: SeedSpec) -> Result<Vec<Complex64>> {
    if d < 1 {
        return Err(NflError::InvalidDimension(d));
    }
    Ok(chunked_samples(samples, seed, |rng| {
        haar_unitary_matrix_with(rng, d).trace()
    }))
}

/// Monte Carlo estimates of trace moments of Haar unitaries on `C^d`
/// (`d ≥ 2`) against their Weingarten values:
/// `E|Tr Y|² = 1`, `E|Tr Y|⁴ = 2`, `E[Re(Tr Y e^{iφ})²] = 1/2`,
/// `E[Re(Tr Y e^{iφ})] = 0` and `E[Re Tr Y] = 0`.
pub fn haar_trace_moments(d: usize, samples: usize, seed: SeedSpec, phi: f64) -> Result<Vec<MomentEstimate>> {
    if d < 2 {
        return Err(NflError::InvalidDimension(d));
    }
    if samples < 2 {
        return Err(NflError::InvalidArgs("need at least two samples".into()));
    }
    let traces = haar_traces(d, samples, seed)?;
    let rot = Complex64::from_polar(1.0, phi);

    let stat = |name: &str, exact: f64, f: &dyn Fn(Complex64) -> f64| {
        let values: Vec<f64> = traces.iter().map(|&t| f(t)).collect();
        let s = Summary::of(&values);
        MomentEstimate {
            name: name.to_string(),
            exact,
            mean: s.mean,
            stderr: s.stderr,
            z: s.z_score(exact),
        }
    };

    Ok(vec![
        stat("E|TrY|^2", 1.0, &|t| t.norm_sqr()),
        stat("E|TrY|^4", 2.0, &|t| t.norm_sqr().powi(2)),
        stat("E[Re(TrY e^iphi)^2]", 0.5, &|t| (t * rot).re.powi(2)),
        stat("E[Re(TrY e^iphi)]", 0.0, &|t| (t * rot).re),
        stat("E[Re TrY]", 0.0, &|t| t.re),
    ])
}
