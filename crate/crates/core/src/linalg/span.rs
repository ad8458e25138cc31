use num_complex::Complex64;

use super::kernels::{axpy, dotc, norm_sqr};
use super::ComplexMatrix;
use crate::error::{NflError, Result};

/// Orthonormal basis of `span(vectors)` and its numerical rank.
///
/// Column-pivoted modified Gram–Schmidt with one reorthogonalization pass:
/// at every step the remaining vector with the largest residual is
/// orthogonalized next, and the process stops once every residual norm is
/// at most `tol`. `basis` is `len × rank`, or `None` when the rank is 0.
pub fn orthonormal_basis_of_span(vectors: &[Vec<Complex64>], tol: f64) -> Result<(Option<ComplexMatrix>, usize)> {
    let first = vectors.first().ok_or(NflError::EmptyInput)?;
    let len = first.len();
    if vectors.iter().any(|v| v.len() != len) {
        return Err(NflError::DimensionMismatch(
            "span vectors have different lengths".into(),
        ));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(NflError::InvalidArgs(format!("tolerance must be positive, got {tol}")));
    }

    Ok(basis_of_rows(&mut vectors.concat(), len, tol))
}

/// [`orthonormal_basis_of_span`] for vectors of length `len` stored back to
/// back in `rows`, which is overwritten with their residuals.
pub(crate) fn basis_of_rows(rows: &mut [Complex64], len: usize, tol: f64) -> (Option<ComplexMatrix>, usize) {
    let count = rows.len().checked_div(len).unwrap_or(0);
    let max_rank = len.min(count);
    // Squared residual norms are downdated after each projection and
    // recomputed once they have shrunk by two orders of magnitude.
    let mut sq: Vec<f64> = rows.chunks_exact(len.max(1)).map(norm_sqr).collect();
    let mut reference = sq.clone();
    let mut active: Vec<usize> = (0..count).collect();
    let mut basis: Vec<Complex64> = Vec::with_capacity(max_rank * len);
    let mut rank = 0;

    while rank < max_rank {
        let (pos, best) =
            active
                .iter()
                .enumerate()
                .map(|(pos, &i)| (pos, sq[i]))
                .fold(
                    (usize::MAX, 0.0f64),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pos == usize::MAX || best.sqrt() <= tol {
            break;
        }
        let idx = active.swap_remove(pos);
        let mut q = rows[idx * len..(idx + 1) * len].to_vec();
        // Second pass against the accepted basis cleans up cancellation error.
        for b in basis.chunks_exact(len) {
            let o = dotc(b, &q);
            axpy(&mut q, -o, b);
        }
        let n = norm_sqr(&q).sqrt();
        if n <= tol {
            continue;
        }
        let inv = 1.0 / n;
        q.iter_mut().for_each(|z| *z *= inv);
        for &i in &active {
            let r = &mut rows[i * len..(i + 1) * len];
            let o = dotc(&q, r);
            axpy(r, -o, &q);
            sq[i] -= o.norm_sqr();
            if sq[i] <= 1e-2 * reference[i] {
                sq[i] = norm_sqr(r);
                reference[i] = sq[i];
            }
        }
        basis.extend_from_slice(&q);
        rank += 1;
    }

    if rank == 0 {
        return (None, 0);
    }
    let m = ComplexMatrix::from_fn(len, rank, |i, j| basis[j * len + i]);
    (Some(m), rank)
}
