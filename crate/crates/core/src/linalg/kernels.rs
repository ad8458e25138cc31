//! Level-1 kernels on interleaved complex slices, spelled out on real and
//! imaginary parts so LLVM vectorizes them.

use num_complex::Complex64;

/// `y += a·x`
#[inline]
pub(crate) fn axpy(y: &mut [Complex64], a: Complex64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        yi.re += a.re * xi.re - a.im * xi.im;
        yi.im += a.re * xi.im + a.im * xi.re;
    }
}

/// `Σ conj(xᵢ)·yᵢ`
#[inline]
pub(crate) fn dotc(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        re += a.re * b.re + a.im * b.im;
        im += a.re * b.im - a.im * b.re;
    }
    Complex64::new(re, im)
}

#[inline]
pub(crate) fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.re * z.re + z.im * z.im).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernels_match_complex_arithmetic() {
        let x: Vec<Complex64> = (0..7).map(|k| Complex64::new(k as f64 - 3.0, 0.5 * k as f64)).collect();
        let y: Vec<Complex64> = (0..7)
            .map(|k| Complex64::new(1.0 / (k + 1) as f64, -(k as f64)))
            .collect();
        let a = Complex64::new(0.3, -1.2);
        let mut z = y.clone();
        axpy(&mut z, a, &x);
        for k in 0..7 {
            assert!((z[k] - (y[k] + a * x[k])).norm() < 1e-14);
        }
        let expected: Complex64 = x.iter().zip(&y).map(|(a, b)| a.conj() * b).sum();
        assert!((dotc(&x, &y) - expected).norm() < 1e-12);
        assert!((norm_sqr(&x) - dotc(&x, &x).re).abs() < 1e-12);
    }
}
