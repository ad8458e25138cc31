//! Simulation toolkit for quantum no-free-lunch theorems with entangled
//! training data.
//!
//! * [`linalg`]: dense complex matrices, QR, Schmidt decomposition, spans and
//!   Hermitian exponentials.
//! * [`sampling`]: seeded Haar unitaries and states, Schmidt-rank-r training
//!   sets and random bistochastic matrices.
//! * [`learning`]: training cost, risk, the perfect learner and a variational
//!   learner with optional shot noise.
//! * [`bounds`]: quantum and classical risk bounds and rank thresholds.
//! * [`experiments`]: deterministic parallel sweeps and their CSV/JSON output.

pub mod bounds;
pub mod error;
pub mod experiments;
pub mod learning;
pub mod linalg;
pub mod sampling;
pub mod stats;

pub use bounds::{BoundCurve, BoundKind, McParams};
pub use error::{NflError, Result};
pub use experiments::{ExperimentConfig, ExperimentResult, OutputFormat, RiskStats};
pub use learning::{HypothesisResult, LearnerMethod, OptimizerConfig};
pub use linalg::{ComplexMatrix, HermitianMatrix, UnitaryOperator};
pub use sampling::{BipartiteState, SeedSpec, SetStyle, TrainingPair, TrainingSet};
pub use stats::Summary;
