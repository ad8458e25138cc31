//! Dense complex linear algebra.
//!
//! Matrix products go through `matrixmultiply`; QR, the span basis and the
//! SVD behind Schmidt decompositions are implemented here; Hermitian
//! eigensolves are delegated to `nalgebra`.

mod expm;
mod kernels;
mod matrix;
mod qr;
mod schmidt;
mod span;
mod svd;

pub use expm::{expm_hermitian, hermitian_eigen};
pub(crate) use kernels::dotc;
pub use matrix::{ComplexMatrix, HermitianMatrix, UnitaryOperator, HERMITIAN_TOL, UNITARY_TOL};
pub use qr::qr_decompose;
pub(crate) use qr::{complete_basis, householder_qr, QrMode};
pub use schmidt::{schmidt_decompose, SchmidtDecomposition, DEFAULT_RANK_TOL};
pub(crate) use span::basis_of_rows;
pub use span::orthonormal_basis_of_span;
