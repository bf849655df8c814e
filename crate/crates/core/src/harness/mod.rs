//! Seeded Monte Carlo runner, configuration parsing and CSV output.

mod config;
pub mod csv;
mod experiment;

pub use config::{RunConfig, CONFIG_KEYS};
pub use experiment::{
    crlb_table, emit_complexity_curves, emit_power_profile, noise_variance, run_experiment,
    run_experiment_with, ComplexityRow, CrlbRow, ExperimentSpec, PowerProfileSpec, ProfileRun,
    RmseRow, Sweep, SEED_DERIVATION, SIGNAL_POWER,
};
