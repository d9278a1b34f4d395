//! Brute-force check of the effective ladder against the fully modulated one.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::drive::{renormalized_couplings, DriveSpec, EffectiveCouplings};
use crate::eigensolve::diagonalize;
use crate::error::{Error, Result};
use crate::model::{build_open_ladder, idx, Leg};
use crate::ode::{rk4_step, step_count, Rk4Work};

/// Largest ladder the brute-force comparison accepts.
pub const MAX_VALIDATION_RUNGS: usize = 3;
/// Norm drift tolerated before the integration is declared failed.
pub const NORM_DRIFT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Largest site-population difference seen over the horizon.
    pub max_deviation: f64,
    pub norm_drift: f64,
    pub steps: usize,
    pub step_us: f64,
    pub effective: EffectiveCouplings,
}

/// Evolves one excitation started on `(L,1)` under the modulated ladder
/// (frame rotating with leg L, Stark shift removed) and under the effective
/// static ladder, and reports the worst population mismatch.
pub fn validate_effective_model(spec: &DriveSpec, n_rungs: usize, horizon_us: f64) -> Result<ValidationReport> {
    spec.validate()?;
    if n_rungs == 0 || n_rungs > MAX_VALIDATION_RUNGS {
        return Err(Error::Domain(format!(
            "validation ladder must have 1..={MAX_VALIDATION_RUNGS} rungs, got {n_rungs}"
        )));
    }
    if !(horizon_us > 0.0) || !horizon_us.is_finite() {
        return Err(Error::Domain("horizon must be > 0".into()));
    }
    let eff = renormalized_couplings(spec, spec.g0, spec.k0)?;
    let dim = 2 * n_rungs;

    let h_eff = build_open_ladder(&eff.ladder(n_rungs))?;
    let sys = diagonalize(&h_eff)?;
    let start = idx(Leg::L, 1);
    let overlaps: Vec<Complex64> = (0..dim).map(|k| sys.state(k)[start].conj()).collect();
    let eff_populations = |t: f64| -> Vec<f64> {
        let mut psi = vec![Complex64::new(0.0, 0.0); dim];
        for (k, o) in overlaps.iter().enumerate() {
            let c = o * Complex64::from_polar(1.0, -TAU * sys.energies[k] * t);
            for (p, v) in psi.iter_mut().zip(sys.state(k)) {
                *p += c * v;
            }
        }
        psi.iter().map(|c| c.norm_sqr()).collect()
    };

    let omega = spec.modulation();
    let beat = spec.delta();
    let split = spec.leg_splitting();
    let mut offset = vec![0.0; dim];
    let mut phase = vec![0.0; dim];
    for l in 1..=n_rungs {
        offset[idx(Leg::R, l)] = split;
        phase[idx(Leg::L, l)] = spec.phi0 - spec.phi * l as f64;
        phase[idx(Leg::R, l)] = -spec.phi0 - spec.phi * l as f64;
    }
    let mut links = Vec::new();
    for l in 1..n_rungs {
        for leg in [Leg::L, Leg::R] {
            links.push((idx(leg, l), idx(leg, l + 1), -spec.g0));
        }
    }
    for l in 1..=n_rungs {
        links.push((idx(Leg::L, l), idx(Leg::R, l), -spec.k0));
    }

    let mut rhs = |t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        for i in 0..dim {
            let e = offset[i] - omega * (TAU * beat * t + phase[i]).cos();
            dy[i] = y[i] * e;
        }
        for &(a, b, c) in &links {
            dy[a] += y[b] * c;
            dy[b] += y[a] * c;
        }
        for d in dy.iter_mut() {
            *d *= Complex64::new(0.0, -TAU);
        }
    };

    let fastest = split.abs() + omega + 2.0 * spec.g0 + spec.k0;
    let max_step = (1.0 / (200.0 * beat.abs())).min(0.02 / (TAU * fastest));
    let steps = step_count(horizon_us, max_step);
    let h = horizon_us / steps as f64;

    let mut psi = vec![Complex64::new(0.0, 0.0); dim];
    psi[start] = Complex64::new(1.0, 0.0);
    let mut work = Rk4Work::default();
    let mut worst = 0.0f64;
    let mut drift = 0.0f64;
    for s in 0..steps {
        let t = s as f64 * h;
        rk4_step(&mut rhs, t, &mut psi, h, &mut work);
        let norm: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
        drift = drift.max((norm - 1.0).abs());
        if drift > NORM_DRIFT_TOL {
            return Err(Error::Integration(format!("norm drift {drift:e} at t = {} μs", t + h)));
        }
        let pe = eff_populations(t + h);
        for (a, b) in psi.iter().zip(&pe) {
            worst = worst.max((a.norm_sqr() - b).abs());
        }
    }
    Ok(ValidationReport { max_deviation: worst, norm_drift: drift, steps, step_us: h, effective: eff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn undriven_resonant_ladder_is_exact() {
        let spec = DriveSpec { omega1: 0.0, omega_r: 2000.0, ..DriveSpec::reference(0.3, FRAC_PI_2) };
        let r = validate_effective_model(&spec, 2, 3.0 / spec.g0).unwrap();
        assert!(r.max_deviation < 1e-6, "{}", r.max_deviation);
    }

    #[test]
    fn rejects_large_ladders() {
        let spec = DriveSpec::reference(0.3, FRAC_PI_2);
        assert!(matches!(validate_effective_model(&spec, 4, 1.0), Err(Error::Domain(_))));
    }
}
