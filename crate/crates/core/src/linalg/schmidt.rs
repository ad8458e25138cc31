use num_complex::Complex64;

use super::svd::jacobi_svd;
use super::ComplexMatrix;
use crate::error::{NflError, Result};

/// Singular values at or below this are treated as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Schmidt decomposition `v = Σ_k √c_k · left_k ⊗ right_k` of a bipartite pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtDecomposition {
    /// Schmidt coefficients `c_k` (squared singular values), descending.
    pub coeffs: Vec<f64>,
    /// d_x × r, orthonormal columns.
    pub left: ComplexMatrix,
    /// d_r × r, orthonormal columns.
    pub right: ComplexMatrix,
}

impl SchmidtDecomposition {
    /// Orders components by decreasing coefficient and applies the phase
    /// convention to the left vectors (compensated on the right).
    pub(crate) fn canonical(coeffs: Vec<f64>, left: ComplexMatrix, right: ComplexMatrix) -> Self {
        let r = coeffs.len();
        debug_assert_eq!(left.cols(), r);
        debug_assert_eq!(right.cols(), r);
        let mut order: Vec<usize> = (0..r).collect();
        order.sort_by(|&a, &b| coeffs[b].total_cmp(&coeffs[a]));
        let (d_x, d_r) = (left.rows(), right.rows());
        let mut new_left = ComplexMatrix::zeros(d_x, r);
        let mut new_right = ComplexMatrix::zeros(d_r, r);
        for (col, &k) in order.iter().enumerate() {
            let fix = leading_phase_fix((0..d_x).map(|x| left[(x, k)]));
            for x in 0..d_x {
                new_left[(x, col)] = left[(x, k)] * fix;
            }
            for rho in 0..d_r {
                new_right[(rho, col)] = right[(rho, k)] / fix;
            }
        }
        Self {
            coeffs: order.iter().map(|&k| coeffs[k]).collect(),
            left: new_left,
            right: new_right,
        }
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// Rebuilds the state vector, index `x * d_r + ρ`.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let (d_x, d_r) = (self.left.rows(), self.right.rows());
        let mut out = vec![Complex64::new(0.0, 0.0); d_x * d_r];
        for (k, c) in self.coeffs.iter().enumerate() {
            let s = c.sqrt();
            for x in 0..d_x {
                let a = self.left[(x, k)] * s;
                for rho in 0..d_r {
                    out[x * d_r + rho] += a * self.right[(rho, k)];
                }
            }
        }
        out
    }
}

/// Schmidt decomposition of `v` on `H_X ⊗ H_R` with `dim H_X = d_x`, `dim H_R = d_r`.
///
/// Components are ordered by decreasing coefficient. Each left vector is
/// rotated so its first non-negligible entry is real and positive, with the
/// compensating phase carried by the right vector.
pub fn schmidt_decompose(v: &[Complex64], d_x: usize, d_r: usize) -> Result<SchmidtDecomposition> {
    if d_x == 0 || d_r == 0 || v.len() != d_x * d_r {
        return Err(NflError::DimensionMismatch(format!(
            "state of length {} on a {d_x}x{d_r} system",
            v.len()
        )));
    }
    let m = ComplexMatrix::new(d_x, d_r, v.to_vec())?;
    // Factor with the short side as columns. For `M = U Σ V†` the k-th
    // component is `U_k ⊗ conj(V_k)`; for `Mᵀ = U Σ V†` it is `conj(V_k) ⊗ U_k`.
    let (sigma, left_of, right_of) = if d_r <= d_x {
        let (s, u, v) = jacobi_svd(&m);
        (s, u, v.conj())
    } else {
        let (s, u, v) = jacobi_svd(&m.transpose());
        (s, v.conj(), u)
    };

    let mut order: Vec<usize> = (0..sigma.len()).filter(|&k| sigma[k] > DEFAULT_RANK_TOL).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));

    let r = order.len();
    if r == 0 {
        return Err(NflError::InvalidArgs("zero state has no Schmidt decomposition".into()));
    }
    let mut left = ComplexMatrix::zeros(d_x, r);
    let mut right = ComplexMatrix::zeros(d_r, r);
    let mut coeffs = Vec::with_capacity(r);
    for (col, &k) in order.iter().enumerate() {
        coeffs.push(sigma[k] * sigma[k]);
        let fix = leading_phase_fix((0..d_x).map(|x| left_of[(x, k)]));
        for x in 0..d_x {
            left[(x, col)] = left_of[(x, k)] * fix;
        }
        for rho in 0..d_r {
            right[(rho, col)] = right_of[(rho, k)] / fix;
        }
    }
    Ok(SchmidtDecomposition { coeffs, left, right })
}

/// Unit phase that makes the first non-negligible entry real and positive.
fn leading_phase_fix(entries: impl Iterator<Item = Complex64>) -> Complex64 {
    let mut entries = entries;
    match entries.find(|z| z.norm() > 1e-10) {
        Some(lead) => (lead / lead.norm()).conj(),
        None => Complex64::new(1.0, 0.0),
    }
}
