use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::SeedSpec;
use crate::error::{NflError, Result};
use crate::linalg::{householder_qr, ComplexMatrix, QrMode, UnitaryOperator};

/// Standard complex Gaussian, `E|z|² = 1`.
pub(crate) fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub(crate) fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// First `k` columns of a Haar unitary on `C^d`: thin QR of a d×k Ginibre
/// matrix with the phases of `R`'s diagonal moved into `Q`.
pub(crate) fn haar_isometry_with<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> ComplexMatrix {
    assert!(k <= d && k > 0);
    householder_qr(&ginibre(rng, d, k), QrMode::Thin).0
}

pub(crate) fn haar_unitary_matrix_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    householder_qr(&ginibre(rng, d, d), QrMode::Full).0
}

pub(crate) fn haar_unitary_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<UnitaryOperator> {
    UnitaryOperator::new(haar_unitary_matrix_with(rng, d))
}

pub(crate) fn haar_state_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<Complex64> {
    loop {
        let mut v: Vec<Complex64> = (0..d).map(|_| complex_normal(rng)).collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 0.0 {
            v.iter_mut().for_each(|z| *z /= n);
            return v;
        }
    }
}

/// Haar-random unitary on `C^d`.
pub fn haar_unitary(d: usize, seed: SeedSpec) -> Result<UnitaryOperator> {
    if d < 1 {
        return Err(NflError::InvalidDimension(d));
    }
    haar_unitary_with(&mut seed.rng(), d)
}

/// Haar-random pure state on `C^d`.
pub fn haar_pure_state(d: usize, seed: SeedSpec) -> Result<Vec<Complex64>> {
    if d < 1 {
        return Err(NflError::InvalidDimension(d));
    }
    Ok(haar_state_with(&mut seed.rng(), d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_unitary_is_a_phase() {
        let u = haar_unitary(1, SeedSpec::new(5, 0)).unwrap();
        assert!((u.matrix()[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn deterministic_given_seed() {
        let a = haar_unitary(4, SeedSpec::new(11, 2)).unwrap();
        let b = haar_unitary(4, SeedSpec::new(11, 2)).unwrap();
        assert_eq!(a, b);
        let c = haar_unitary(4, SeedSpec::new(11, 3)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(
            haar_unitary(0, SeedSpec::new(0, 0)),
            Err(NflError::InvalidDimension(0))
        ));
        assert!(matches!(
            haar_pure_state(0, SeedSpec::new(0, 0)),
            Err(NflError::InvalidDimension(0))
        ));
    }

    #[test]
    fn one_dimensional_state_is_a_phase() {
        let s = haar_pure_state(1, SeedSpec::new(9, 9)).unwrap();
        assert!((s[0].norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn large_unitaries_pass_the_invariant() {
        for k in 0..3 {
            let u = haar_unitary(64, SeedSpec::new(1, k)).unwrap();
            assert!(u.matrix().unitarity_deviation() < 1e-12);
        }
    }

    #[test]
    fn isometry_columns_are_orthonormal() {
        let mut rng = SeedSpec::new(3, 3).rng();
        let q = haar_isometry_with(&mut rng, 10, 4);
        assert_eq!((q.rows(), q.cols()), (10, 4));
        assert!(q.unitarity_deviation() < 1e-13);
    }
}
