//! Dissipative protocols: preparing the single-particle ground state and
//! measuring link currents through two-site Rabi oscillations.

pub mod dissipation;
pub mod generation;
pub mod master;
pub mod measurement;

pub use dissipation::DissipationSpec;
pub use generation::{
    excitation_overlaps, fidelity_exact, fidelity_strong_coupling, generation_plan, lindblad_two_level_from,
    lindblad_two_level_numeric, DampingRegime, Fidelity, GenerationPlan, PopulationTrace,
};
pub use measurement::{
    extract_current, rabi_population_difference, simulate_measurement, FitKnowns, FitReport, MeasurementPair,
    NoiseSpec, RabiTrace, FIT_WINDOW_PERIODS,
};
