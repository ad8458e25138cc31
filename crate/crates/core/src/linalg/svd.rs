use num_complex::Complex64;

use super::kernels::{dotc, norm_sqr};
use super::ComplexMatrix;

const MAX_SWEEPS: usize = 80;

/// Thin SVD `A = U·diag(σ)·V†` by one-sided Jacobi rotations.
///
/// Columns of `A` are rotated pairwise until mutually orthogonal; the
/// rotations accumulate into `V`. Singular values come back unsorted and
/// columns of `U` with `σ = 0` are left at zero. Works best with
/// `rows ≥ cols`.
pub(crate) fn jacobi_svd(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix, ComplexMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    let tiny = f64::MIN_POSITIVE / f64::EPSILON;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm_sqr(&cols[p]);
                let beta = norm_sqr(&cols[q]);
                let gamma = dotc(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g <= tiny || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                rotate(&mut cols, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma: Vec<f64> = cols.iter().map(|c| norm_sqr(c).sqrt()).collect();
    let u = ComplexMatrix::from_fn(m, n, |i, j| {
        if sigma[j] > 0.0 {
            cols[j][i] / sigma[j]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let v = ComplexMatrix::from_fn(n, n, |i, j| v[j][i]);
    (sigma, u, v)
}

/// `(x_p, x_q) ← (c·x_p − s·e^{-iφ}·x_q, s·e^{iφ}·x_p + c·x_q)`, which
/// zeroes `⟨x_p, x_q⟩ = |γ|e^{iφ}` for the Jacobi pair `(c, s)`.
fn rotate(x: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let (head, tail) = x.split_at_mut(q);
    let (xp, xq) = (&mut head[p], &mut tail[0]);
    let sp = phase * s;
    let sq = phase.conj() * s;
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let (ap, bq) = (*a, *b);
        *a = ap * c - bq * sq;
        *b = ap * sp + bq * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recompose(s: &[f64], u: &ComplexMatrix, v: &ComplexMatrix) -> ComplexMatrix {
        let diag: Vec<Complex64> = s.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        u.matmul(&ComplexMatrix::from_diag(&diag)).matmul(&v.adjoint())
    }

    #[test]
    fn rank_deficient_complex_matrix() {
        // rank 2: outer products of fixed complex vectors
        let x = [
            Complex64::new(1.0, 0.5),
            Complex64::new(-0.3, 0.2),
            Complex64::new(0.0, 1.0),
        ];
        let y = [
            Complex64::new(0.2, -0.7),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.4, 0.4),
        ];
        let a = ComplexMatrix::from_fn(3, 3, |i, j| x[i] * y[j].conj() + y[i] * x[(j + 1) % 3]);
        let (s, u, v) = jacobi_svd(&a);
        assert!(recompose(&s, &u, &v).sub(&a).max_abs() < 1e-14);
        assert_eq!(s.iter().filter(|&&x| x > 1e-12).count(), 2);
        assert!(v.unitarity_deviation() < 1e-14);
    }

    #[test]
    fn diagonal_input_is_left_alone() {
        let a = ComplexMatrix::from_diag(&[Complex64::new(3.0, 0.0), Complex64::new(0.0, 2.0)]);
        let (s, u, v) = jacobi_svd(&a);
        assert_eq!(s, vec![3.0, 2.0]);
        assert!(recompose(&s, &u, &v).sub(&a).max_abs() < 1e-15);
    }
}
