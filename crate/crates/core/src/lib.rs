//! Classical boson-sampling toolkit.
//!
//! Permanents (exact and randomized), interferometer unitaries, ideal
//! boson / distinguishable / uniform output distributions, sequential
//! validation tests, and timing models for racing a photonic sampler
//! against early electronic computers.

pub mod distributions;
pub mod error;
pub mod interferometer;
pub mod matrix;
pub mod modes;
pub mod permanent;
pub mod race;
pub mod rng;
pub mod validation;

pub use distributions::{
    boson_distribution, distinguishable_distribution, draw_samples, empirical_frequencies,
    outcome_probability, uniform_distribution, EventStream, OutcomeDistribution, Restriction,
    Source,
};
pub use error::{Error, Result};
pub use interferometer::{
    check_unitary, haar_unitary, mesh_unitary, scatter_submatrix, MeshSpec, PolarizationSplit,
};
pub use matrix::ComplexMatrix;
pub use modes::{enumerate_full, enumerate_no_collision, ModeConfig};
pub use num_complex::Complex64;
pub use permanent::{
    gurvits_estimate, gurvits_exhaustive, perm_naive, perm_ryser, ryser_op_counts, OpCount,
    PermanentEstimate,
};
pub use race::{
    expected_count_rate, gurvits_time_ms, no_collision_ratio, quantum_sample_time_ms, race_table,
    ryser_time_ms, MachineSpec, RaceInputs, RaceTable, RateParams,
};
pub use validation::{
    bayesian_trace, counter_trace, metrics, BayesianTrace, CounterTrace, MetricReport,
};
