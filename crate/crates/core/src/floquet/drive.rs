//! Two-tone drive parameters and the Bessel-renormalized ladder they produce.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::bessel::{bessel_j, j0};
use crate::error::{Error, Result};
use crate::model::{LadderConfig, Units};

/// Largest accepted `|δ/δ_j|` before a warning.
pub const BEAT_RATIO_TOL: f64 = 0.2;

/// Homogeneous two-tone drive of every qubit, plus the bare couplings of the
/// circuit it modulates. All frequencies in MHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveSpec {
    pub omega1: f64,
    pub omega2: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// Phase offset `φ_0`, with `φ_L = −φ_R = φ_0`.
    pub phi0: f64,
    /// Flux per plaquette `φ`.
    pub phi: f64,
    pub omega_l: f64,
    pub omega_r: f64,
    pub g0: f64,
    pub k0: f64,
}

impl DriveSpec {
    /// Drive with tone amplitudes 178 MHz at detunings 1000 and 1100 MHz on a
    /// ladder with `g_0 = 3.5`, `K_0 = 33` MHz, legs split by the beat.
    pub fn reference(phi0: f64, phi: f64) -> Self {
        Self {
            omega1: 178.0,
            omega2: 178.0,
            delta1: 1000.0,
            delta2: 1100.0,
            phi0,
            phi,
            omega_l: 2000.0,
            omega_r: 2100.0,
            g0: 3.5,
            k0: 33.0,
        }
    }

    /// Beat frequency `δ = δ_2 − δ_1`.
    pub fn delta(&self) -> f64 {
        self.delta2 - self.delta1
    }

    /// Modulation strength `Ω = |Ω_1 Ω_2 / δ_1|`.
    pub fn modulation(&self) -> f64 {
        (self.omega1 * self.omega2 / self.delta1).abs()
    }

    /// Stark shift `ω_s = Σ_j Ω_j² / (2δ_j)`.
    pub fn stark_shift(&self) -> f64 {
        self.omega1.powi(2) / (2.0 * self.delta1) + self.omega2.powi(2) / (2.0 * self.delta2)
    }

    /// Leg splitting `Δ = ω_R − ω_L`.
    pub fn leg_splitting(&self) -> f64 {
        self.omega_r - self.omega_l
    }

    /// Harmonic `m` of the beat that brings the rungs into resonance,
    /// `m = round(Δ/δ)`.
    pub fn resonance_order(&self) -> i32 {
        (self.leg_splitting() / self.delta()).round() as i32
    }

    pub fn eta_x(&self) -> f64 {
        2.0 * self.modulation() / self.delta() * (self.phi / 2.0).sin()
    }

    pub fn eta_y(&self) -> f64 {
        2.0 * self.modulation() / self.delta() * self.phi0.sin()
    }

    pub fn validate(&self) -> Result<()> {
        let mut errors = Vec::new();
        let finite = [
            self.omega1,
            self.omega2,
            self.delta1,
            self.delta2,
            self.phi0,
            self.phi,
            self.omega_l,
            self.omega_r,
            self.g0,
            self.k0,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            errors.push("drive parameters must be finite".to_string());
        }
        if self.delta1 == 0.0 || self.delta2 == 0.0 {
            errors.push("delta1 and delta2 must be nonzero".to_string());
        }
        if self.delta() == 0.0 {
            errors.push("delta2 − delta1 must be nonzero".to_string());
        }
        if self.omega1 < 0.0 || self.omega2 < 0.0 {
            errors.push("omega1 and omega2 must be ≥ 0".to_string());
        }
        if !(self.phi0.abs() <= PI) {
            errors.push("phi0 must lie in [-π, π]".to_string());
        }
        if !(self.phi.abs() <= PI) {
            errors.push("phi must lie in [-π, π]".to_string());
        }
        if !(self.g0 > 0.0) {
            errors.push("g0 must be > 0".to_string());
        }
        if !(self.k0 >= 0.0) {
            errors.push("k0 must be ≥ 0".to_string());
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errors))
        }
    }

    /// Soft violations of the regime the effective model assumes.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, amp) in [("omega1", self.omega1), ("omega2", self.omega2)] {
            for (dname, det) in [("delta1", self.delta1), ("delta2", self.delta2)] {
                let r = (amp / det).powi(2);
                if r >= super::perturbative::LARGE_DETUNING_TOL {
                    out.push(format!("({name}/{dname})² = {r:.3} is not small"));
                }
            }
        }
        for (dname, det) in [("delta1", self.delta1), ("delta2", self.delta2)] {
            let r = (self.delta() / det).abs();
            if r >= BEAT_RATIO_TOL {
                out.push(format!("|delta/{dname}| = {r:.3} is not small"));
            }
        }
        let mismatch = self.leg_splitting() - self.resonance_order() as f64 * self.delta();
        if mismatch.abs() > 1e-9 * self.delta().abs().max(1.0) {
            out.push(format!(
                "leg splitting {} MHz is off resonance with the beat by {mismatch} MHz",
                self.leg_splitting()
            ));
        }
        out
    }
}

/// Effective ladder produced by the drive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveCouplings {
    pub g: f64,
    /// Signed interleg coupling `K_0 · J_m(η_y)`.
    pub k: f64,
    /// Flux per plaquette `m·φ`, wrapped into `(−π, π]`.
    pub phi: f64,
    pub eta_x: f64,
    pub eta_y: f64,
    pub order: i32,
}

impl EffectiveCouplings {
    /// Ladder in MHz. A negative `K` only flips the sign of every rung, which
    /// a gauge change on one leg removes, so `|K|` is used.
    pub fn ladder(&self, n_rungs: usize) -> LadderConfig {
        LadderConfig::new(n_rungs, self.g, self.k.abs(), self.phi, Units::PhysicalMhz)
    }
}

pub fn renormalized_couplings(spec: &DriveSpec, g0: f64, k0: f64) -> Result<EffectiveCouplings> {
    spec.validate()?;
    let order = spec.resonance_order();
    let (eta_x, eta_y) = (spec.eta_x(), spec.eta_y());
    Ok(EffectiveCouplings {
        g: g0 * j0(eta_x),
        k: k0 * bessel_j(order, eta_y),
        phi: wrap_phase(order as f64 * spec.phi),
        eta_x,
        eta_y,
        order,
    })
}

fn wrap_phase(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TuningPoint {
    pub phi0: f64,
    /// Small-angle value `(Ω/δ)(K_0/g_0)·g·sin φ_0`.
    pub k_small_angle: f64,
    /// `(K_0/g_0)·g·J_1(η_y)`.
    pub k_bessel: f64,
}

/// Interleg coupling as a function of `φ_0`, in units where the intraleg
/// coupling is `g`.
pub fn interleg_tuning_curve(spec: &DriveSpec, g: f64, phi0_grid: &[f64]) -> Result<Vec<TuningPoint>> {
    spec.validate()?;
    let ratio = spec.k0 / spec.g0 * g;
    let slope = spec.modulation() / spec.delta();
    phi0_grid
        .iter()
        .map(|&phi0| {
            if !(phi0.abs() <= PI) {
                return Err(Error::Domain(format!("phi0 = {phi0} outside [-π, π]")));
            }
            let s = DriveSpec { phi0, ..*spec };
            Ok(TuningPoint {
                phi0,
                k_small_angle: ratio * slope * phi0.sin(),
                k_bessel: ratio * bessel_j(1, s.eta_y()),
            })
        })
        .collect()
}
