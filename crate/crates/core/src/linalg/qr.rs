use num_complex::Complex64;

use super::kernels::axpy;
use super::ComplexMatrix;
use crate::error::{NflError, Result};

/// QR factorization of a square matrix.
///
/// `R` has a real non-negative diagonal, which makes the factorization unique
/// for non-singular input (and `Q` Haar distributed when `m` is Ginibre).
pub fn qr_decompose(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !m.is_square() {
        return Err(NflError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let (q, r) = householder_qr(m, QrMode::Full);
    Ok((q, r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum QrMode {
    /// `Q` is m×m, `R` is m×n.
    Full,
    /// `Q` is m×n, `R` is n×n. Requires m ≥ n.
    Thin,
}

/// Columns per panel of the blocked factorization.
const BLOCK: usize = 16;
/// Below this many target columns reflectors are applied one at a time.
const NARROW: usize = 8;

/// Product `H_0 H_1 ⋯ H_{b-1} = I − V T V†` of consecutive Householder
/// reflectors acting on rows `offset..`.
struct BlockReflector {
    offset: usize,
    reflectors: Vec<(Vec<Complex64>, f64)>,
    v: ComplexMatrix,
    t: ComplexMatrix,
}

impl BlockReflector {
    /// `reflectors[i] = (v_i, τ_i)` with `v_i` supported on local rows `i..`.
    fn new(offset: usize, rows: usize, reflectors: Vec<(Vec<Complex64>, f64)>) -> Self {
        let b = reflectors.len();
        let mut v = ComplexMatrix::zeros(rows, b);
        for (i, (vi, _)) in reflectors.iter().enumerate() {
            for (l, z) in vi.iter().enumerate() {
                v[(i + l, i)] = *z;
            }
        }
        let mut t = ComplexMatrix::zeros(b, b);
        for (i, (vi, tau)) in reflectors.iter().enumerate() {
            t[(i, i)] = Complex64::new(*tau, 0.0);
            if i == 0 || *tau == 0.0 {
                continue;
            }
            // T[..i, i] = −τ T[..i, ..i] V[:, ..i]† v_i
            let z: Vec<Complex64> = (0..i)
                .map(|j| (0..vi.len()).map(|l| v[(i + l, j)].conj() * vi[l]).sum())
                .collect();
            for row in 0..i {
                let acc: Complex64 = (row..i).map(|j| t[(row, j)] * z[j]).sum();
                t[(row, i)] = -acc * *tau;
            }
        }
        Self {
            offset,
            reflectors,
            v,
            t,
        }
    }

    /// `X ← (I − V op(T) V†) X` on rows `offset..` and columns `col_start..`
    /// of `target`, with `op(T) = T†` when `adjoint` is set.
    fn apply(&self, target: &mut ComplexMatrix, col_start: usize, adjoint: bool) {
        let rows = target.rows() - self.offset;
        let cols = target.cols() - col_start;
        if cols == 0 {
            return;
        }
        if cols < NARROW {
            let mut scratch = vec![Complex64::new(0.0, 0.0); cols];
            let mut apply_one = |i: usize| {
                let (v, tau) = &self.reflectors[i];
                let range = col_start..target.cols();
                apply_reflector_left(target, self.offset + i, v, *tau, range, &mut scratch);
            };
            if adjoint {
                (0..self.reflectors.len()).for_each(&mut apply_one);
            } else {
                (0..self.reflectors.len()).rev().for_each(&mut apply_one);
            }
            return;
        }
        let x = ComplexMatrix::from_fn(rows, cols, |i, j| target[(self.offset + i, col_start + j)]);
        let w = self.v.adjoint().matmul(&x);
        let w = if adjoint {
            self.t.adjoint().matmul(&w)
        } else {
            self.t.matmul(&w)
        };
        let update = self.v.matmul(&w);
        for i in 0..rows {
            let row = &mut target.row_mut(self.offset + i)[col_start..];
            for (z, u) in row.iter_mut().zip(update.row(i)) {
                *z -= u;
            }
        }
    }
}

/// Householder QR of an m×n matrix with the diagonal of `R` made real and non-negative.
///
/// Panels of [`BLOCK`] columns are factored one reflector at a time; the
/// trailing columns and the accumulation of `Q` use the blocked form
/// `I − V T V†`, so most of the work runs through matrix products.
pub(crate) fn householder_qr(a: &ComplexMatrix, mode: QrMode) -> (ComplexMatrix, ComplexMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut r = a.clone();
    let steps = m.min(n);
    let mut blocks = Vec::with_capacity(steps.div_ceil(BLOCK));
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];

    let mut k0 = 0;
    while k0 < steps {
        let end = (k0 + BLOCK).min(steps);
        let panel: Vec<(Vec<Complex64>, f64)> = (k0..end)
            .map(|k| reflect_column(&mut r, k, end, &mut scratch))
            .collect();
        let block = BlockReflector::new(k0, m - k0, panel);
        block.apply(&mut r, end, true);
        blocks.push(block);
        k0 = end;
    }

    let q_cols = match mode {
        QrMode::Full => m,
        QrMode::Thin => {
            assert!(m >= n, "thin QR needs rows >= cols");
            n
        }
    };
    let mut q = ComplexMatrix::zeros(m, q_cols);
    for i in 0..q_cols {
        q[(i, i)] = Complex64::new(1.0, 0.0);
    }
    // Backward accumulation: columns left of a block's offset are still
    // unit vectors with no support on the rows it touches.
    for block in blocks.iter().rev() {
        if block.offset < q_cols {
            block.apply(&mut q, block.offset, false);
        }
    }

    // Move the diagonal phases of R into Q.
    for k in 0..steps {
        let d = r[(k, k)];
        let dn = d.norm();
        if dn == 0.0 {
            continue;
        }
        let ph = d / dn;
        if k < q_cols {
            for i in 0..m {
                q[(i, k)] *= ph;
            }
        }
        let conj = ph.conj();
        for j in k..n {
            r[(k, j)] *= conj;
        }
        r[(k, k)] = Complex64::new(dn, 0.0);
    }

    let r = match mode {
        QrMode::Full => r,
        QrMode::Thin => ComplexMatrix::from_fn(n, n, |i, j| r[(i, j)]),
    };
    (q, r)
}

/// Zeroes column `k` below the diagonal with a reflector `I − τ v v†`,
/// applied to columns `k..panel_end`. Returns `(v, τ)`; `τ = 0` when the
/// column is already zero.
fn reflect_column(
    r: &mut ComplexMatrix,
    k: usize,
    panel_end: usize,
    scratch: &mut [Complex64],
) -> (Vec<Complex64>, f64) {
    let m = r.rows();
    let mut unit = vec![Complex64::new(0.0, 0.0); m - k];
    unit[0] = Complex64::new(1.0, 0.0);
    let norm = (k..m).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return (unit, 0.0);
    }
    let x0 = r[(k, k)];
    let phase = if x0.norm() > 0.0 {
        x0 / x0.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let alpha = -phase * norm;
    let mut v: Vec<Complex64> = (k..m).map(|i| r[(i, k)]).collect();
    v[0] -= alpha;
    let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if vnorm2 == 0.0 {
        return (unit, 0.0);
    }
    let tau = 2.0 / vnorm2;
    apply_reflector_left(r, k, &v, tau, k..panel_end, scratch);
    // Exact zeros below the diagonal.
    r[(k, k)] = alpha;
    for i in k + 1..m {
        r[(i, k)] = Complex64::new(0.0, 0.0);
    }
    (v, tau)
}

/// Applies `I − τ v v†` (acting on rows `offset..`) to columns `cols` of `target`.
fn apply_reflector_left(
    target: &mut ComplexMatrix,
    offset: usize,
    v: &[Complex64],
    tau: f64,
    cols: std::ops::Range<usize>,
    scratch: &mut [Complex64],
) {
    let s = &mut scratch[..cols.len()];
    s.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
    for (i, vi) in v.iter().enumerate() {
        axpy(s, vi.conj(), &target.row(offset + i)[cols.clone()]);
    }
    for (i, vi) in v.iter().enumerate() {
        axpy(&mut target.row_mut(offset + i)[cols.clone()], -vi * tau, s);
    }
}

/// Extends `basis` (d×k, orthonormal columns) to a full d×d unitary whose
/// first k columns span the same subspace.
pub(crate) fn complete_basis(basis: &ComplexMatrix) -> ComplexMatrix {
    householder_qr(basis, QrMode::Full).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_upper_triangular(r: &ComplexMatrix) {
        for i in 0..r.rows() {
            for j in 0..i.min(r.cols()) {
                assert_eq!(r[(i, j)], c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn identity_factors_trivially() {
        let (q, r) = qr_decompose(&ComplexMatrix::identity(3)).unwrap();
        assert!(q.sub(&ComplexMatrix::identity(3)).max_abs() < 1e-15);
        assert!(r.sub(&ComplexMatrix::identity(3)).max_abs() < 1e-15);
    }

    #[test]
    fn positive_diagonal_is_left_alone() {
        let m = ComplexMatrix::from_diag(&[c(2.0, 0.0), c(3.0, 0.0)]);
        let (q, r) = qr_decompose(&m).unwrap();
        assert!(q.sub(&ComplexMatrix::identity(2)).max_abs() < 1e-15);
        assert!(r.sub(&m).max_abs() < 1e-15);
    }

    #[test]
    fn rejects_non_square() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            qr_decompose(&m),
            Err(NflError::NonSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn reconstructs_complex_input() {
        let m = ComplexMatrix::from_fn(5, 5, |i, j| {
            c(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64 * 0.5)
        });
        let (q, r) = qr_decompose(&m).unwrap();
        assert!(q.matmul(&r).sub(&m).max_abs() < 1e-12);
        assert!(q.unitarity_deviation() < 1e-12);
        assert_upper_triangular(&r);
        for k in 0..5 {
            assert!(r[(k, k)].im == 0.0 && r[(k, k)].re >= 0.0);
        }
    }

    #[test]
    fn thin_qr_of_tall_matrix() {
        let m = ComplexMatrix::from_fn(6, 2, |i, j| c(i as f64 + 1.0, (j as f64) * (i as f64)));
        let (q, r) = householder_qr(&m, QrMode::Thin);
        assert_eq!((q.rows(), q.cols()), (6, 2));
        assert_eq!((r.rows(), r.cols()), (2, 2));
        assert!(q.matmul(&r).sub(&m).max_abs() < 1e-12);
        assert!(q.unitarity_deviation() < 1e-12);
    }

    #[test]
    fn completed_basis_keeps_leading_span() {
        let s = 1.0 / 2f64.sqrt();
        let b = ComplexMatrix::from_columns(&[vec![c(s, 0.0), c(0.0, s), c(0.0, 0.0)]]).unwrap();
        let full = complete_basis(&b);
        assert!(full.unitarity_deviation() < 1e-14);
        let overlap = full
            .column(0)
            .iter()
            .zip(b.column(0))
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>();
        assert!((overlap.norm() - 1.0).abs() < 1e-14);
    }

    fn pseudo_random(rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |i, j| {
            let h = ((i * 131 + j * 71 + 17) * 2654435761usize) % 1000;
            c(h as f64 / 500.0 - 1.0, ((i * 13 + j * 29) % 17) as f64 / 8.5 - 1.0)
        })
    }

    #[test]
    fn shapes_spanning_several_panels() {
        for (rows, cols, mode) in [
            (40, 40, QrMode::Full),
            (50, 23, QrMode::Thin),
            (50, 23, QrMode::Full),
            (20, 37, QrMode::Full),
        ] {
            let m = pseudo_random(rows, cols);
            let (q, r) = householder_qr(&m, mode);
            assert!(q.matmul(&r).sub(&m).max_abs() < 1e-12, "{rows}x{cols}");
            assert!(q.unitarity_deviation() < 1e-12, "{rows}x{cols}");
            assert_upper_triangular(&r);
        }
    }

    #[test]
    fn zero_columns_are_skipped() {
        let mut m = pseudo_random(30, 30);
        for i in 0..30 {
            m[(i, 3)] = c(0.0, 0.0);
            m[(i, 20)] = c(0.0, 0.0);
        }
        let (q, r) = qr_decompose(&m).unwrap();
        assert!(q.matmul(&r).sub(&m).max_abs() < 1e-12);
        assert!(q.unitarity_deviation() < 1e-12);
    }
}
