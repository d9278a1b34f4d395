//! Second-order effective Hamiltonian of a multi-level qubit under two
//! off-resonant tones.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Threshold for the large-detuning ratios `|Ω_{j,n}/δ_{j',n}|²`.
pub const LARGE_DETUNING_TOL: f64 = 0.1;

/// The two tones driving the transition `n → n+1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    /// Complex drive amplitudes `Ω_{1,n}`, `Ω_{2,n}` (MHz).
    pub amplitude: [Complex64; 2],
    /// Detunings `δ_{1,n}`, `δ_{2,n}` (MHz).
    pub detuning: [f64; 2],
}

impl Transition {
    pub fn new(omega1: Complex64, omega2: Complex64, delta1: f64, delta2: f64) -> Self {
        Self { amplitude: [omega1, omega2], detuning: [delta1, delta2] }
    }

    fn stark(&self) -> f64 {
        (0..2).map(|j| self.amplitude[j].norm_sqr() / (4.0 * self.detuning[j])).sum()
    }

    fn beat(&self) -> f64 {
        (self.amplitude[0] * self.amplitude[1]).norm() / self.detuning[0]
    }
}

/// Level ladder `ω_{q,0..N_lvl−1}` with the drive on each upward transition.
///
/// `transitions[n]` drives `n → n+1`; `None` marks a transition that is absent
/// (for the top level, one that leaves the modeled subspace).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelScheme {
    pub energies: Vec<f64>,
    pub transitions: Vec<Option<Transition>>,
}

impl LevelScheme {
    /// Two-level qubit driven on `0 → 1` only.
    pub fn two_level(omega_q: f64, transition: Transition) -> Self {
        Self { energies: vec![0.0, omega_q], transitions: vec![Some(transition), None] }
    }

    /// Weakly anharmonic limit: `ω_n = n·ω̄`, `Ω_{j,n} = √(n+1)·Ω̄_j`, constant
    /// detunings, with every upward transition driven.
    pub fn harmonic(levels: usize, omega_bar: f64, amplitude: [f64; 2], detuning: [f64; 2]) -> Self {
        let energies = (0..levels).map(|n| n as f64 * omega_bar).collect();
        let transitions = (0..levels)
            .map(|n| {
                let s = ((n + 1) as f64).sqrt();
                Some(Transition::new(
                    Complex64::new(s * amplitude[0], 0.0),
                    Complex64::new(s * amplitude[1], 0.0),
                    detuning[0],
                    detuning[1],
                ))
            })
            .collect();
        Self { energies, transitions }
    }

    pub fn levels(&self) -> usize {
        self.energies.len()
    }

    fn validate(&self) -> Result<()> {
        if self.levels() < 2 {
            return Err(Error::Domain("a level scheme needs at least two levels".into()));
        }
        if self.transitions.len() != self.levels() {
            return Err(Error::Dimension { expected: self.levels(), got: self.transitions.len() });
        }
        for (n, t) in self.transitions.iter().enumerate() {
            if let Some(t) = t {
                if t.detuning.iter().any(|&d| d == 0.0 || !d.is_finite()) {
                    return Err(Error::Domain(format!("zero detuning on transition {n}")));
                }
            }
        }
        Ok(())
    }

    /// Human-readable violations of `|Ω_{j,n}/δ_{j',n}|² ≪ 1`.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (n, t) in self.transitions.iter().enumerate() {
            let Some(t) = t else { continue };
            for j in 0..2 {
                for jp in 0..2 {
                    let r = (t.amplitude[j].norm() / t.detuning[jp]).powi(2);
                    if r >= LARGE_DETUNING_TOL {
                        out.push(format!("transition {n}: |Ω_{}/δ_{}|² = {r:.3} is not small", j + 1, jp + 1));
                    }
                }
            }
        }
        out
    }
}

/// Stark shifts `ν_n` and modulation strengths `η_n` (MHz); index 0 is the
/// reference level and holds zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveModulation {
    pub stark: Vec<f64>,
    pub strength: Vec<f64>,
    /// Modulation phase `φ_{n−1} = arg Ω_{1,n−1} − arg Ω_{2,n−1}` of level `n`.
    pub phase: Vec<f64>,
    pub warnings: Vec<String>,
}

pub fn stark_and_modulation(scheme: &LevelScheme) -> Result<EffectiveModulation> {
    scheme.validate()?;
    let stark_of = |n: usize| scheme.transitions[n].map_or(0.0, |t| t.stark());
    let beat_of = |n: usize| scheme.transitions[n].map_or(0.0, |t| t.beat());
    let levels = scheme.levels();
    let mut stark = vec![0.0; levels];
    let mut strength = vec![0.0; levels];
    let mut phase = vec![0.0; levels];
    for n in 1..levels {
        stark[n] = stark_of(n) - stark_of(n - 1) - stark_of(0);
        strength[n] = 0.5 * (beat_of(n) - beat_of(n - 1) - beat_of(0));
        if let Some(t) = scheme.transitions[n - 1] {
            phase[n] = t.amplitude[0].arg() - t.amplitude[1].arg();
        }
    }
    Ok(EffectiveModulation { stark, strength, phase, warnings: scheme.warnings() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flux_qubit(scale: f64) -> LevelScheme {
        let t = Transition::new(Complex64::new(178.0 * scale, 0.0), Complex64::new(178.0 * scale, 0.0), 1000.0, 1100.0);
        LevelScheme::two_level(2000.0, t)
    }

    #[test]
    fn two_level_reduction() {
        let m = stark_and_modulation(&flux_qubit(1.0)).unwrap();
        let stark = 178.0f64.powi(2) / 2000.0 + 178.0f64.powi(2) / 2200.0;
        assert!((m.stark[1] + stark).abs() < 1e-12);
        assert!((m.strength[1] + 178.0 * 178.0 / 1000.0).abs() < 1e-12);
        assert!(m.warnings.is_empty());
    }

    #[test]
    fn harmonic_limit_vanishes() {
        let s = LevelScheme::harmonic(6, 5000.0, [150.0, 120.0], [900.0, 1000.0]);
        let m = stark_and_modulation(&s).unwrap();
        assert!(m.stark.iter().all(|v| v.abs() < 1e-12));
        assert!(m.strength.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn quadratic_in_amplitude() {
        let a = stark_and_modulation(&flux_qubit(1.0)).unwrap();
        let b = stark_and_modulation(&flux_qubit(1.7)).unwrap();
        for n in 0..2 {
            assert!((b.stark[n] - 1.7f64.powi(2) * a.stark[n]).abs() < 1e-10);
            assert!((b.strength[n] - 1.7f64.powi(2) * a.strength[n]).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_zero_detuning_and_flags_strong_drive() {
        let t = Transition::new(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), 0.0, 1.0);
        assert!(stark_and_modulation(&LevelScheme::two_level(1.0, t)).is_err());
        let t = Transition::new(Complex64::new(500.0, 0.0), Complex64::new(1.0, 0.0), 1000.0, 1100.0);
        assert!(!LevelScheme::two_level(1.0, t).warnings().is_empty());
    }
}
