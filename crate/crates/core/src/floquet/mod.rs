//! Drive engineering: two-tone frequency modulation, the rotating-frame
//! ladder it produces, and a brute-force check of that reduction.

pub mod bessel;
pub mod drive;
pub mod perturbative;
pub mod validation;

pub use drive::{interleg_tuning_curve, renormalized_couplings, DriveSpec, EffectiveCouplings, TuningPoint};
pub use perturbative::{stark_and_modulation, EffectiveModulation, LevelScheme, Transition};
pub use validation::{validate_effective_model, ValidationReport};
