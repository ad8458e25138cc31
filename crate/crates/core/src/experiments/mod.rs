//! Seeded Monte Carlo sweeps over `(r, t)` grids and their artifacts.

mod config;
mod output;
mod sweep;

pub use config::{default_n_sets, ExperimentConfig, DEFAULT_N_UNITARIES, MAX_GRID_VALUE, MAX_REPEATS};
pub use output::{
    bounds_csv, format_float, grid_csv, read_result, to_json_string, write_result, write_result_to, OutputFormat,
    BOUNDS_HEADER, GRID_HEADER,
};
pub use sweep::{
    run_classical_mc, run_sweep, run_trial, sweep_unitaries, trial_seed, unitary_seed, ExperimentResult, RiskStats,
    TrialOutcome,
};
