//! Preparing the single-particle ground state with a shaped resonant drive.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::master::MasterEquation;
use crate::eigensolve::EigenSystem;
use crate::error::{Error, Result};

/// Relative ground gap below which the ground level counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Per-site drive that couples the vacuum to the ground level only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationPlan {
    /// `B′_{d,l} = χ^{(1)}_{d,l} · C₁` in site-index order (MHz).
    pub profile: Vec<Complex64>,
    /// Rabi frequency `C₁` (MHz).
    pub c1: f64,
    /// Drive detuning `ε = μ₁`, in the units of the eigensystem.
    pub epsilon: f64,
    /// Duration of the π pulse, `1/(2C₁)` μs.
    pub t_pi: f64,
}

pub fn generation_plan(sys: &EigenSystem, c1: f64) -> Result<GenerationPlan> {
    if !(c1 > 0.0) || !c1.is_finite() {
        return Err(Error::Domain("c1 must be > 0".into()));
    }
    let gap = sys.ground_gap();
    if gap < DEGENERACY_TOL * sys.coupling_scale.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateGround { gap });
    }
    Ok(GenerationPlan {
        profile: sys.ground_state().iter().map(|c| c * c1).collect(),
        c1,
        epsilon: sys.ground_energy(),
        t_pi: 1.0 / (2.0 * c1),
    })
}

/// `C_n = Σ χ^{(n)*}_{d,l} B′_{d,l}` for every level.
pub fn excitation_overlaps(profile: &[Complex64], sys: &EigenSystem) -> Result<Vec<Complex64>> {
    if profile.len() != sys.dim() {
        return Err(Error::Dimension { expected: sys.dim(), got: profile.len() });
    }
    Ok((0..sys.dim()).map(|n| sys.state(n).iter().zip(profile).map(|(x, b)| x.conj() * b).sum()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DampingRegime {
    Underdamped,
    Critical,
    Overdamped,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fidelity {
    pub value: f64,
    pub regime: DampingRegime,
}

fn check_rates(c1: f64, gamma1: f64, dephasing1: f64) -> Result<()> {
    if !(c1 >= 0.0 && gamma1 >= 0.0 && dephasing1 >= 0.0) {
        return Err(Error::Domain("rates must be ≥ 0".into()));
    }
    Ok(())
}

/// Ground-level population after driving for `t` μs with Rabi frequency `c1`,
/// relaxation `gamma1` and dephasing `dephasing1` (all MHz).
pub fn fidelity_exact(t: f64, c1: f64, gamma1: f64, dephasing1: f64) -> Result<Fidelity> {
    check_rates(c1, gamma1, dephasing1)?;
    let (c, g, d) = (TAU * c1, TAU * gamma1, TAU * dephasing1);
    let denom = c * c + g * d / 2.0;
    if denom == 0.0 {
        return Ok(Fidelity { value: 0.0, regime: DampingRegime::Critical });
    }
    let r0 = (c * c / 2.0) / denom;
    let gp = g + d / 2.0;
    let disc = c * c - 0.25 * (g - d / 2.0).powi(2);
    let envelope = (-gp * t / 2.0).exp();
    let scale = c * c + 0.25 * (g - d / 2.0).powi(2);
    let (osc, regime) = if disc.abs() <= 1e-12 * scale {
        (1.0 + gp * t / 2.0, DampingRegime::Critical)
    } else if disc > 0.0 {
        let w = disc.sqrt();
        ((w * t).cos() + gp / (2.0 * w) * (w * t).sin(), DampingRegime::Underdamped)
    } else {
        let k = (-disc).sqrt();
        ((k * t).cosh() + gp / (2.0 * k) * (k * t).sinh(), DampingRegime::Overdamped)
    };
    Ok(Fidelity { value: r0 - r0 * envelope * osc, regime })
}

/// Strong-coupling approximation `½[1 − e^{−(γ₁+Γ₁/2)t/2} cos(C₁t)]`.
pub fn fidelity_strong_coupling(t: f64, c1: f64, gamma1: f64, dephasing1: f64) -> Result<f64> {
    check_rates(c1, gamma1, dephasing1)?;
    let gp = TAU * (gamma1 + dephasing1 / 2.0);
    Ok(0.5 * (1.0 - (-gp * t / 2.0).exp() * (TAU * c1 * t).cos()))
}

/// Numerically integrated `ρ₁₁(t)` of the driven, damped two-level system.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationTrace {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Starts from the vacuum.
pub fn lindblad_two_level_numeric(
    c1: f64,
    gamma1: f64,
    dephasing1: f64,
    horizon: f64,
    step: f64,
) -> Result<PopulationTrace> {
    lindblad_two_level_from(0.0, c1, gamma1, dephasing1, horizon, step)
}

/// Starts from the diagonal state with ground-level population `rho11`.
pub fn lindblad_two_level_from(
    rho11: f64,
    c1: f64,
    gamma1: f64,
    dephasing1: f64,
    horizon: f64,
    step: f64,
) -> Result<PopulationTrace> {
    if !(0.0..=1.0).contains(&rho11) {
        return Err(Error::Domain("initial population must lie in [0, 1]".into()));
    }
    check_rates(c1, gamma1, dephasing1)?;
    let fastest = TAU * c1.max(gamma1).max(dephasing1);
    if !(step > 0.0) || step > 1.0 / (50.0 * fastest) {
        return Err(Error::Domain(format!("step {step} exceeds 1/(50·{fastest:.4}) for these rates")));
    }
    if !(horizon >= 0.0) {
        return Err(Error::Domain("horizon must be ≥ 0".into()));
    }
    let half = Complex64::new(TAU * c1 / 2.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let me = MasterEquation {
        n: 2,
        hamiltonian: vec![zero, half, half, zero],
        relax: vec![0.0, TAU * gamma1],
        dephase: vec![0.0, TAU * dephasing1],
    };
    let mut rho0 = vec![zero; 4];
    rho0[0] = Complex64::new(1.0 - rho11, 0.0);
    rho0[3] = Complex64::new(rho11, 0.0);
    let steps = (horizon / step).round() as usize;
    let mut trace = PopulationTrace { times: Vec::with_capacity(steps + 1), values: Vec::with_capacity(steps + 1) };
    me.evolve(&rho0, step, steps, 1, |t, rho| {
        trace.times.push(t);
        trace.values.push(rho[3].re);
    })?;
    Ok(trace)
}
