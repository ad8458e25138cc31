use num_complex::Complex64;

use super::{ComplexMatrix, HermitianMatrix, UnitaryOperator};
use crate::error::Result;

/// `exp(i · scale · H)` through the eigendecomposition `H = E Λ E†`.
pub fn expm_hermitian(h: &HermitianMatrix, scale: f64) -> Result<UnitaryOperator> {
    let (eigenvalues, vectors) = hermitian_eigen(h);
    let phases: Vec<Complex64> = eigenvalues
        .iter()
        .map(|&l| Complex64::from_polar(1.0, scale * l))
        .collect();
    let d = h.dim();
    let scaled = ComplexMatrix::from_fn(d, d, |i, j| vectors[(i, j)] * phases[j]);
    UnitaryOperator::new(scaled.matmul(&vectors.adjoint()))
}

/// Eigenvalues (ascending) and unitary eigenvector matrix of a Hermitian matrix.
pub fn hermitian_eigen(h: &HermitianMatrix) -> (Vec<f64>, ComplexMatrix) {
    let eig = h.matrix().to_nalgebra().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let d = h.dim();
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(d, d, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}
