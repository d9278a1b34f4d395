//! Reading a link current off the Rabi oscillation of two isolated sites.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::dissipation::DissipationSpec;
use super::master::MasterEquation;
use crate::currents::link_currents;
use crate::eigensolve::EigenSystem;
use crate::error::{Error, Result};
use crate::model::{idx, LadderConfig, Leg, Units};

/// Number of Rabi periods used by [`extract_current`] by default.
pub const FIT_WINDOW_PERIODS: f64 = 3.0;

/// Two neighboring sites `a → b` decoupled from the rest of the ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum MeasurementPair {
    /// `(d, l) → (d, l+1)`.
    Intraleg { leg: Leg, l: usize },
    /// `(L, l) → (R, l)`.
    Rung { l: usize },
}

impl MeasurementPair {
    fn check(&self, n_rungs: usize) -> Result<()> {
        let ok = match *self {
            MeasurementPair::Intraleg { l, .. } => l >= 1 && l < n_rungs,
            MeasurementPair::Rung { l } => l >= 1 && l <= n_rungs,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("{self:?} does not fit a ladder of {n_rungs} rungs")))
        }
    }

    /// Site indices `(a, b)`; the population difference is `ρ_bb − ρ_aa`.
    pub fn sites(&self) -> (usize, usize) {
        match *self {
            MeasurementPair::Intraleg { leg, l } => (idx(leg, l), idx(leg, l + 1)),
            MeasurementPair::Rung { l } => (idx(Leg::L, l), idx(Leg::R, l)),
        }
    }

    /// Coupling `g` or `K` of the pair (MHz).
    pub fn coupling(&self, cfg: &LadderConfig) -> f64 {
        match self {
            MeasurementPair::Intraleg { .. } => cfg.g,
            MeasurementPair::Rung { .. } => cfg.k,
        }
    }

    /// `⟨b|H|a⟩` (MHz).
    fn hopping(&self, cfg: &LadderConfig) -> Complex64 {
        match *self {
            MeasurementPair::Intraleg { .. } => Complex64::new(-cfg.g, 0.0),
            MeasurementPair::Rung { l } => -cfg.k * cfg.rung_phase(l),
        }
    }
}

/// Calibration known to the experimenter: the pair coupling (MHz) and the
/// damping `γ̃` of the oscillation (rad/μs).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitKnowns {
    pub coupling_mhz: f64,
    pub gamma_tilde: f64,
}

impl FitKnowns {
    pub fn for_pair(pair: MeasurementPair, cfg: &LadderConfig, rates: &DissipationSpec) -> Result<Self> {
        rates.validate(cfg.dim())?;
        pair.check(cfg.n_rungs)?;
        let (a, b) = pair.sites();
        let sum = rates.relaxation[a] + rates.relaxation[b] + rates.dephasing[a] + rates.dephasing[b];
        Ok(Self { coupling_mhz: pair.coupling(cfg), gamma_tilde: TAU * sum / 4.0 })
    }

    /// `ω̃ = 2 · 2π · coupling`.
    pub fn omega_tilde(&self) -> f64 {
        2.0 * TAU * self.coupling_mhz
    }

    pub fn period(&self) -> f64 {
        1.0 / (2.0 * self.coupling_mhz)
    }
}

/// Projection of the ladder ground state onto the pair.
struct PairState {
    rho_aa: f64,
    rho_bb: f64,
    rho_ab: Complex64,
    current: f64,
}

fn pair_state(pair: MeasurementPair, sys: &EigenSystem, cfg: &LadderConfig) -> Result<PairState> {
    pair.check(cfg.n_rungs)?;
    let chi = sys.ground_state();
    let (a, b) = pair.sites();
    let (rho_aa, rho_bb) = (chi[a].norm_sqr(), chi[b].norm_sqr());
    if rho_aa + rho_bb < 1e-14 {
        return Err(Error::Domain("ground state has no weight on the measured pair".into()));
    }
    let phys = LadderConfig { units: Units::PhysicalMhz, ..*cfg };
    let field = link_currents(chi, &phys)?;
    let current = match pair {
        MeasurementPair::Intraleg { leg, l } => field.leg(leg, l),
        MeasurementPair::Rung { l } => field.rung(l),
    };
    Ok(PairState { rho_aa, rho_bb, rho_ab: chi[a] * chi[b].conj(), current })
}

/// Strong-coupling population difference
/// `P(t) = e^{−γ̃t}[cos(ω̃t) P(0) + sin(ω̃t) j / (2π c)]`, couplings read as MHz.
pub fn rabi_population_difference(
    t: f64,
    pair: MeasurementPair,
    sys: &EigenSystem,
    cfg: &LadderConfig,
    rates: &DissipationSpec,
) -> Result<f64> {
    let known = FitKnowns::for_pair(pair, cfg, rates)?;
    let s = pair_state(pair, sys, cfg)?;
    let p0 = s.rho_bb - s.rho_aa;
    let w = known.omega_tilde();
    Ok((-known.gamma_tilde * t).exp() * ((w * t).cos() * p0 + (w * t).sin() * s.current / (TAU * known.coupling_mhz)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub seed: u64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RabiTrace {
    pub pair: MeasurementPair,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub seed: Option<u64>,
}

/// Integrates the vacuum + two-site master equation from the projected
/// ground state, sampling `ρ_bb − ρ_aa` at `samples` equally spaced times in
/// `[0, horizon]`.
pub fn simulate_measurement(
    pair: MeasurementPair,
    sys: &EigenSystem,
    cfg: &LadderConfig,
    rates: &DissipationSpec,
    horizon: f64,
    samples: usize,
    noise: Option<NoiseSpec>,
) -> Result<RabiTrace> {
    rates.validate(cfg.dim())?;
    let s = pair_state(pair, sys, cfg)?;
    if samples < 2 || !(horizon > 0.0) {
        return Err(Error::Domain("need at least two samples over a positive horizon".into()));
    }
    let (a, b) = pair.sites();
    let zero = Complex64::new(0.0, 0.0);
    let hop = pair.hopping(cfg) * TAU;
    let mut hamiltonian = vec![zero; 9];
    hamiltonian[2 * 3 + 1] = hop;
    hamiltonian[3 + 2] = hop.conj();
    let me = MasterEquation {
        n: 3,
        hamiltonian,
        relax: vec![0.0, TAU * rates.relaxation[a], TAU * rates.relaxation[b]],
        dephase: vec![0.0, TAU * rates.dephasing[a], TAU * rates.dephasing[b]],
    };
    let mut rho0 = vec![zero; 9];
    rho0[0] = Complex64::new(1.0 - s.rho_aa - s.rho_bb, 0.0);
    rho0[4] = Complex64::new(s.rho_aa, 0.0);
    rho0[8] = Complex64::new(s.rho_bb, 0.0);
    rho0[3 + 2] = s.rho_ab;
    rho0[2 * 3 + 1] = s.rho_ab.conj();

    let spacing = horizon / (samples - 1) as f64;
    let sub = ((spacing * 200.0 * me.max_rate()).ceil() as usize).max(1);
    let mut values = Vec::with_capacity(samples);
    me.evolve(&rho0, spacing / sub as f64, sub * (samples - 1), sub, |_, rho| {
        values.push(rho[8].re - rho[4].re);
    })?;
    let times = (0..samples).map(|i| i as f64 * spacing).collect();

    if let Some(n) = noise {
        let dist = Normal::new(0.0, n.sigma).map_err(|e| Error::Domain(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(n.seed);
        for v in values.iter_mut() {
            *v = (*v + dist.sample(&mut rng)).clamp(-1.0, 1.0);
        }
    }
    Ok(RabiTrace { pair, times, values, seed: noise.map(|n| n.seed) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    /// Estimated current (μs⁻¹).
    pub j_estimate: f64,
    pub cos_amplitude: f64,
    pub sin_amplitude: f64,
    /// Root-mean-square misfit over the window.
    pub residual: f64,
    pub window_periods: f64,
    pub samples_used: usize,
}

/// Fits `e^{−γ̃t}[A cos(ω̃t) + B sin(ω̃t)]` with `γ̃`, `ω̃` held fixed over the
/// first `window_periods` Rabi periods and returns `j = 2π · coupling · B`.
pub fn extract_current(trace: &RabiTrace, known: &FitKnowns, window_periods: f64) -> Result<FitReport> {
    if !(known.coupling_mhz > 0.0) {
        return Err(Error::Domain("the pair coupling must be > 0".into()));
    }
    let period = known.period();
    let last = trace.times.last().copied().unwrap_or(0.0);
    if last < period * (1.0 - 1e-9) {
        return Err(Error::Fit { reason: "trace shorter than one Rabi period".into(), residual: f64::NAN });
    }
    let end = window_periods * period * (1.0 + 1e-12);
    let w = known.omega_tilde();
    let (mut scc, mut scs, mut sss, mut syc, mut sys_) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut used = Vec::new();
    for (&t, &y) in trace.times.iter().zip(&trace.values) {
        if t > end {
            break;
        }
        let e = (-known.gamma_tilde * t).exp();
        let (c, s) = (e * (w * t).cos(), e * (w * t).sin());
        scc += c * c;
        scs += c * s;
        sss += s * s;
        syc += y * c;
        sys_ += y * s;
        used.push((c, s, y));
    }
    let det = scc * sss - scs * scs;
    if used.len() < 3 || !(det > 1e-12 * scc * sss) {
        return Err(Error::Fit { reason: "fit window is degenerate".into(), residual: f64::NAN });
    }
    let a = (syc * sss - sys_ * scs) / det;
    let b = (sys_ * scc - syc * scs) / det;
    let sse: f64 = used.iter().map(|(c, s, y)| (y - a * c - b * s).powi(2)).sum();
    Ok(FitReport {
        j_estimate: b * TAU * known.coupling_mhz,
        cos_amplitude: a,
        sin_amplitude: b,
        residual: (sse / used.len() as f64).sqrt(),
        window_periods,
        samples_used: used.len(),
    })
}
