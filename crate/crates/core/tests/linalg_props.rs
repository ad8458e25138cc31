use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

use nfl_core::linalg::{expm_hermitian, orthonormal_basis_of_span, schmidt_decompose, DEFAULT_RANK_TOL};
use nfl_core::sampling::{haar_unitary, schmidt_rank_state};
use nfl_core::{ComplexMatrix, HermitianMatrix, SeedSpec};

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
}

fn random_hermitian(d: usize, seed: u64) -> HermitianMatrix {
    let mut rng = SeedSpec::new(seed, 0).rng();
    let a = ComplexMatrix::from_fn(d, d, |_, _| gaussian(&mut rng));
    let h = a.add(&a.adjoint()).scale(Complex64::new(0.5, 0.0));
    HermitianMatrix::new(h).unwrap()
}

fn svd_rank(vectors: &[Vec<Complex64>], tol: f64) -> usize {
    let len = vectors[0].len();
    let m = DMatrix::from_fn(len, vectors.len(), |i, j| vectors[j][i]);
    m.singular_values().iter().filter(|&&s| s > tol).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn haar_unitaries_are_unitary(d in 1usize..=24, seed in any::<u64>(), stream in any::<u64>()) {
        let u = haar_unitary(d, SeedSpec::new(seed, stream)).unwrap();
        prop_assert!(u.matrix().unitarity_deviation() <= 1e-10);
    }

    #[test]
    fn schmidt_round_trip_at_every_rank(
        d_x in 1usize..=6,
        d_r in 1usize..=6,
        rank_pick in 0usize..6,
        seed in any::<u64>(),
    ) {
        let r = 1 + rank_pick % d_x.min(d_r);
        let state = schmidt_rank_state(d_x, d_r, r, SeedSpec::new(seed, 1)).unwrap();
        let dec = schmidt_decompose(state.amplitudes(), d_x, d_r).unwrap();
        prop_assert_eq!(dec.rank(), r);
        let back = dec.reconstruct();
        let err = back
            .iter()
            .zip(state.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        prop_assert!(err <= 1e-10, "reconstruction error {err}");
        prop_assert!(dec.coeffs.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn exponentials_with_opposite_scale_cancel(d in 1usize..=12, seed in any::<u64>(), s in -5.0f64..5.0) {
        let h = random_hermitian(d, seed);
        let forward = expm_hermitian(&h, s).unwrap();
        let backward = expm_hermitian(&h, -s).unwrap();
        let product = forward.matrix().matmul(backward.matrix());
        let dev = product.sub(&ComplexMatrix::identity(d)).max_abs();
        prop_assert!(dev <= 1e-10, "deviation {dev}");
    }

    #[test]
    fn span_rank_agrees_with_svd(
        len in 1usize..=16,
        count in 1usize..=16,
        planted in 1usize..=16,
        seed in any::<u64>(),
    ) {
        // count vectors drawn from a random subspace of dimension `planted`
        let mut rng = SeedSpec::new(seed, 2).rng();
        let planted = planted.min(len);
        let frame: Vec<Vec<Complex64>> =
            (0..planted).map(|_| (0..len).map(|_| gaussian(&mut rng)).collect()).collect();
        let vectors: Vec<Vec<Complex64>> = (0..count)
            .map(|_| {
                let w: Vec<Complex64> = (0..planted).map(|_| gaussian(&mut rng)).collect();
                (0..len).map(|i| frame.iter().zip(&w).map(|(f, c)| f[i] * c).sum()).collect()
            })
            .collect();
        let (basis, rank) = orthonormal_basis_of_span(&vectors, DEFAULT_RANK_TOL).unwrap();
        prop_assert_eq!(rank, svd_rank(&vectors, DEFAULT_RANK_TOL));
        if let Some(b) = basis {
            let gram = b.adjoint_matmul(&b);
            prop_assert!(gram.sub(&ComplexMatrix::identity(rank)).max_abs() <= 1e-10);
        }
    }
}
