use serde::{Deserialize, Serialize};

use super::haar::haar_unitary_matrix_with;
use super::SeedSpec;
use crate::error::{NflError, Result};

const SUM_TOL: f64 = 1e-9;

/// Non-negative square matrix whose rows and columns all sum to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BistochasticMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl BistochasticMatrix {
    /// Validates row-major `entries` of a `dim × dim` matrix.
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(NflError::DimensionMismatch(format!(
                "{} entries for a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|&x| !x.is_finite() || x < 0.0) {
            return Err(NflError::InvalidArgs("entries must be finite and non-negative".into()));
        }
        let m = Self { dim, entries };
        for k in 0..dim {
            let row: f64 = (0..dim).map(|j| m.entry(k, j)).sum();
            let col: f64 = (0..dim).map(|i| m.entry(i, k)).sum();
            if (row - 1.0).abs() > SUM_TOL || (col - 1.0).abs() > SUM_TOL {
                return Err(NflError::InvalidArgs(format!("row/column {k} sums to {row}/{col}")));
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.dim).map(|i| self.entry(i, j)).collect()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

/// Random bistochastic matrix `B_ij = |u_ij|²` for a Haar unitary `u`.
pub fn random_bistochastic(d: usize, seed: SeedSpec) -> Result<BistochasticMatrix> {
    if d < 2 {
        return Err(NflError::InvalidDimension(d));
    }
    let u = haar_unitary_matrix_with(&mut seed.rng(), d);
    BistochasticMatrix::new(d, u.as_slice().iter().map(|z| z.norm_sqr()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_structure() {
        let m = random_bistochastic(2, SeedSpec::new(4, 4)).unwrap();
        let p = m.entry(0, 0);
        assert!((0.0..=1.0).contains(&p));
        assert!((m.entry(1, 1) - p).abs() < 1e-12);
        assert!((m.entry(0, 1) - (1.0 - p)).abs() < 1e-12);
        assert!((m.entry(1, 0) - (1.0 - p)).abs() < 1e-12);
    }

    #[test]
    fn deterministic_given_seed() {
        let a = random_bistochastic(5, SeedSpec::new(1, 2)).unwrap();
        let b = random_bistochastic(5, SeedSpec::new(1, 2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_small_dimension_and_bad_sums() {
        assert!(matches!(
            random_bistochastic(1, SeedSpec::new(0, 0)),
            Err(NflError::InvalidDimension(1))
        ));
        assert!(BistochasticMatrix::new(2, vec![0.5, 0.5, 0.6, 0.4]).is_err());
        assert!(BistochasticMatrix::new(2, vec![1.5, -0.5, -0.5, 1.5]).is_err());
    }

    #[test]
    fn sums_hold_in_larger_dimension() {
        let m = random_bistochastic(16, SeedSpec::new(7, 0)).unwrap();
        for k in 0..16 {
            let s: f64 = m.column(k).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }
}
