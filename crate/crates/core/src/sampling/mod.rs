//! Seeded sampling of Haar unitaries and states, Schmidt-rank-r states,
//! training sets and random bistochastic matrices.
//!
//! Every sampler is a pure function of its [`SeedSpec`].

mod bistochastic;
mod haar;
mod moments;
mod seed;
mod states;

pub use bistochastic::{random_bistochastic, BistochasticMatrix};
pub use haar::{haar_pure_state, haar_unitary};
pub(crate) use haar::{haar_state_with, haar_unitary_matrix_with};
pub(crate) use moments::chunked_samples;
pub use moments::{haar_trace_moments, haar_traces, MomentEstimate};
pub use seed::SeedSpec;
pub use states::{
    schmidt_rank_state, training_set, BipartiteState, SetStyle, TrainingPair, TrainingSet, MIN_SCHMIDT_COEFF,
};
