//! Two-leg ladder in an engineered gauge potential.
//!
//! The crate covers the single-excitation physics of a flux ladder built from
//! two-tone-driven superconducting qubits:
//!
//! * [`model`]: configuration, site indexing and the open-ladder Hamiltonian.
//! * [`bands`]: infinite-ladder dispersion, critical coupling and the
//!   characteristic roots of the bulk recurrence.
//! * [`eigensolve`]: open-ladder diagonalization and four-mode fits.
//! * [`currents`]: link currents, chiral current, vortex counting and
//!   phase-diagram sweeps.
//! * [`floquet`]: two-tone drive engineering (Stark shifts, Bessel-renormalized
//!   couplings, full-drive validation).
//! * [`dynamics`]: ground-state generation and current measurement under
//!   relaxation and dephasing.
//! * [`cli`]: the `fluxladder` command line front end.
//!
//! Frequencies are ordinary frequencies in MHz and times are in μs. Any
//! frequency that multiplies a time is converted to an angular rate
//! (`2π · value`) internally.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bands;
pub mod cli;
pub mod currents;
pub mod dynamics;
pub mod eigensolve;
pub mod error;
pub mod floquet;
pub mod model;
pub mod ode;

pub use error::{Error, Result};
pub use model::{HermitianMatrix, LadderConfig, Leg, SiteId, Units};

/// Converts an ordinary frequency (MHz) to an angular rate (rad/μs).
#[inline]
pub fn angular(freq_mhz: f64) -> f64 {
    std::f64::consts::TAU * freq_mhz
}
