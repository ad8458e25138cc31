use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::haar::{haar_isometry_with, haar_state_with};
use super::SeedSpec;
use crate::error::{NflError, Result};
use crate::linalg::{
    basis_of_rows, schmidt_decompose, ComplexMatrix, SchmidtDecomposition, UnitaryOperator, DEFAULT_RANK_TOL,
};

/// Sampled Schmidt coefficients are redrawn until all are at least this large.
pub const MIN_SCHMIDT_COEFF: f64 = 1e-6;

const NORM_TOL: f64 = 1e-10;

/// Normalized pure state on `H_X ⊗ H_R` together with its Schmidt data.
///
/// Amplitudes are indexed `x * d_r + ρ`, i.e. the row-major flattening of a
/// `d_x × d_r` coefficient matrix `M` with `M = Σ_k √c_k ξ_k ζ_kᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    amplitudes: ComplexMatrix,
    schmidt: SchmidtDecomposition,
}

impl BipartiteState {
    /// Wraps an arbitrary normalized state, computing its Schmidt decomposition.
    pub fn from_amplitudes(v: &[Complex64], d_x: usize, d_r: usize) -> Result<Self> {
        let schmidt = schmidt_decompose(v, d_x, d_r)?;
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(NflError::InvalidArgs(format!("state norm {norm} is not 1")));
        }
        Ok(Self {
            amplitudes: ComplexMatrix::new(d_x, d_r, v.to_vec())?,
            schmidt,
        })
    }

    pub(crate) fn from_schmidt(schmidt: SchmidtDecomposition) -> Self {
        let roots: Vec<Complex64> = schmidt.coeffs.iter().map(|c| Complex64::new(c.sqrt(), 0.0)).collect();
        let weighted = ComplexMatrix::from_fn(schmidt.left.rows(), schmidt.rank(), |i, k| {
            schmidt.left[(i, k)] * roots[k]
        });
        let amplitudes = weighted.matmul(&schmidt.right.transpose());
        Self { amplitudes, schmidt }
    }

    pub fn d_x(&self) -> usize {
        self.amplitudes.rows()
    }

    pub fn d_r(&self) -> usize {
        self.amplitudes.cols()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.amplitudes.as_slice()
    }

    /// Amplitudes as the `d_x × d_r` coefficient matrix.
    pub fn amplitude_matrix(&self) -> &ComplexMatrix {
        &self.amplitudes
    }

    pub fn schmidt(&self) -> &SchmidtDecomposition {
        &self.schmidt
    }

    pub fn schmidt_rank(&self) -> usize {
        self.schmidt.rank()
    }

    pub fn schmidt_coeffs(&self) -> &[f64] {
        &self.schmidt.coeffs
    }

    /// `(U ⊗ I)|ψ⟩`
    pub fn apply_system(&self, u: &UnitaryOperator) -> Result<BipartiteState> {
        if u.dim() != self.d_x() {
            return Err(NflError::DimensionMismatch(format!(
                "{}-dim unitary on {}-dim system",
                u.dim(),
                self.d_x()
            )));
        }
        let amplitudes = u.matrix().matmul(&self.amplitudes);
        let schmidt = SchmidtDecomposition::canonical(
            self.schmidt.coeffs.clone(),
            u.matrix().matmul(&self.schmidt.left),
            self.schmidt.right.clone(),
        );
        Ok(Self { amplitudes, schmidt })
    }

    /// `⟨self|other⟩`
    pub fn overlap(&self, other: &BipartiteState) -> Complex64 {
        self.amplitudes.inner(&other.amplitudes)
    }
}

fn check_rank(d_x: usize, d_r: usize, r: usize) -> Result<()> {
    if r == 0 || r > d_x.min(d_r) {
        return Err(NflError::RankOutOfRange { r, d_x, d_r });
    }
    Ok(())
}

/// Squared amplitudes of a Haar state on `C^r`, redrawn until every entry
/// reaches [`MIN_SCHMIDT_COEFF`].
fn sample_coeffs<R: Rng + ?Sized>(rng: &mut R, r: usize) -> Vec<f64> {
    if r == 1 {
        return vec![1.0];
    }
    loop {
        let coeffs: Vec<f64> = haar_state_with(rng, r).iter().map(|z| z.norm_sqr()).collect();
        if coeffs.iter().all(|&c| c >= MIN_SCHMIDT_COEFF) {
            return coeffs;
        }
    }
}

pub(crate) fn schmidt_rank_state_with<R: Rng + ?Sized>(
    rng: &mut R,
    d_x: usize,
    d_r: usize,
    r: usize,
) -> BipartiteState {
    let coeffs = sample_coeffs(rng, r);
    let left = haar_isometry_with(rng, d_x, r);
    let right = haar_isometry_with(rng, d_r, r);
    BipartiteState::from_schmidt(SchmidtDecomposition::canonical(coeffs, left, right))
}

/// Random state of Schmidt rank exactly `r` on a `d_x × d_r` system.
///
/// Coefficients are Haar-induced (squared amplitudes of a Haar state on
/// `C^r`); left and right Schmidt vectors are the first `r` columns of
/// independent Haar unitaries.
pub fn schmidt_rank_state(d_x: usize, d_r: usize, r: usize, seed: SeedSpec) -> Result<BipartiteState> {
    check_rank(d_x, d_r, r)?;
    Ok(schmidt_rank_state_with(&mut seed.rng(), d_x, d_r, r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetStyle {
    /// All Schmidt vectors of all inputs form one orthonormal set.
    Orthonormal,
    /// Inputs are independent random states of rank r.
    Generic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainingPair {
    pub input: BipartiteState,
    pub output: BipartiteState,
}

/// `t` input/output pairs with `output = (U ⊗ I) input`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainingSet {
    pairs: Vec<TrainingPair>,
    d_x: usize,
    d_r: usize,
    r: usize,
    span_dim: usize,
    span_basis: Option<ComplexMatrix>,
    style: SetStyle,
}

impl TrainingSet {
    /// Wraps explicit pairs. Inputs must share one Schmidt rank and live on
    /// a `d_x × d_r` system; outputs are taken as given.
    pub fn from_pairs(pairs: Vec<TrainingPair>, d_x: usize, d_r: usize) -> Result<Self> {
        let r = pairs.first().map_or(1, |p| p.input.schmidt_rank());
        for p in &pairs {
            for state in [&p.input, &p.output] {
                if state.d_x() != d_x || state.d_r() != d_r {
                    return Err(NflError::DimensionMismatch(format!(
                        "{}x{} state in a {d_x}x{d_r} training set",
                        state.d_x(),
                        state.d_r()
                    )));
                }
            }
            if p.input.schmidt_rank() != r {
                return Err(NflError::InvalidArgs(
                    "training inputs have different Schmidt ranks".into(),
                ));
            }
        }
        Ok(TrainingSet::with_span(pairs, d_x, d_r, r, SetStyle::Generic))
    }

    fn with_span(pairs: Vec<TrainingPair>, d_x: usize, d_r: usize, r: usize, style: SetStyle) -> Self {
        let mut rows: Vec<Complex64> = Vec::with_capacity(pairs.len() * r * d_x);
        for p in &pairs {
            let left = &p.input.schmidt().left;
            for k in 0..left.cols() {
                rows.extend((0..d_x).map(|x| left[(x, k)]));
            }
        }
        let (span_basis, span_dim) = basis_of_rows(&mut rows, d_x, DEFAULT_RANK_TOL);
        TrainingSet {
            pairs,
            d_x,
            d_r,
            r,
            span_dim,
            span_basis,
            style,
        }
    }

    pub fn pairs(&self) -> &[TrainingPair] {
        &self.pairs
    }

    pub fn t(&self) -> usize {
        self.pairs.len()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn d_x(&self) -> usize {
        self.d_x
    }

    pub fn d_r(&self) -> usize {
        self.d_r
    }

    /// Dimension of the span of all input Schmidt vectors in `H_X`.
    pub fn span_dim(&self) -> usize {
        self.span_dim
    }

    /// Orthonormal basis (`d_x × span_dim`) of the span of all input
    /// Schmidt vectors; `None` when the set is empty.
    pub fn span_basis(&self) -> Option<&ComplexMatrix> {
        self.span_basis.as_ref()
    }

    pub fn style(&self) -> SetStyle {
        self.style
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Left Schmidt vectors of every input, in pair order.
    pub fn input_schmidt_vectors(&self) -> Vec<Vec<Complex64>> {
        self.pairs
            .iter()
            .flat_map(|p| {
                let left = &p.input.schmidt().left;
                (0..left.cols()).map(move |k| left.column(k))
            })
            .collect()
    }
}

/// Samples `t` training pairs of Schmidt rank `r` for the target `u`.
pub fn training_set(
    u: &UnitaryOperator,
    d_r: usize,
    r: usize,
    t: usize,
    style: SetStyle,
    seed: SeedSpec,
) -> Result<TrainingSet> {
    let d = u.dim();
    check_rank(d, d_r, r)?;
    if style == SetStyle::Orthonormal && r * t > d {
        return Err(NflError::OrthonormalOverflow { needed: r * t, d });
    }
    let mut rng = seed.rng();

    let inputs: Vec<BipartiteState> = match style {
        SetStyle::Orthonormal if t > 0 => {
            let all_left = haar_isometry_with(&mut rng, d, r * t);
            (0..t)
                .map(|j| {
                    let coeffs = sample_coeffs(&mut rng, r);
                    let right = haar_isometry_with(&mut rng, d_r, r);
                    let left = all_left.columns_range(j * r, (j + 1) * r);
                    BipartiteState::from_schmidt(SchmidtDecomposition::canonical(coeffs, left, right))
                })
                .collect()
        }
        SetStyle::Orthonormal => Vec::new(),
        SetStyle::Generic => (0..t).map(|_| schmidt_rank_state_with(&mut rng, d, d_r, r)).collect(),
    };

    if inputs.is_empty() {
        return Ok(TrainingSet::with_span(Vec::new(), d, d_r, r, style));
    }
    // One product maps every input's left Schmidt vectors at once.
    let lefts: Vec<&ComplexMatrix> = inputs.iter().map(|s| &s.schmidt.left).collect();
    let moved = u.matrix().matmul(&ComplexMatrix::hstack(&lefts)?);
    let pairs = inputs
        .into_iter()
        .enumerate()
        .map(|(j, input)| {
            let output = BipartiteState::from_schmidt(SchmidtDecomposition::canonical(
                input.schmidt.coeffs.clone(),
                moved.columns_range(j * r, (j + 1) * r),
                input.schmidt.right.clone(),
            ));
            TrainingPair { input, output }
        })
        .collect();
    Ok(TrainingSet::with_span(pairs, d, d_r, r, style))
}
