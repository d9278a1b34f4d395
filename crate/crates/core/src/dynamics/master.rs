//! Rate-form master equation on a small level set with a vacuum level.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ode::{rk4_step, Rk4Work};

/// Trace error tolerated at any step.
pub const TRACE_TOL: f64 = 1e-9;
/// Population overshoot outside `[0, 1]` tolerated at any step.
pub const POSITIVITY_TOL: f64 = 1e-9;

/// `dρ/dt = −i[H, ρ] + D[ρ]` on levels `0..n`, level 0 being the vacuum.
///
/// Level `k` loses population to the vacuum at `relax[k]`; a coherence
/// `ρ_xy` decays at `(dephase[x] + dephase[y]) / 2`. Rates are angular
/// (rad/μs) and `relax[0] = dephase[0] = 0`. For `dephase ≥ relax` this is the
/// Lindblad generator with jumps `√γ_k |0⟩⟨k|` and `√(Γ_k − γ_k) |k⟩⟨k|`.
#[derive(Debug, Clone)]
pub struct MasterEquation {
    pub n: usize,
    /// Row-major Hamiltonian in rad/μs.
    pub hamiltonian: Vec<Complex64>,
    pub relax: Vec<f64>,
    pub dephase: Vec<f64>,
}

impl MasterEquation {
    pub fn max_rate(&self) -> f64 {
        let h = self.hamiltonian.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        self.relax.iter().chain(&self.dephase).fold(h, |m, &r| m.max(r))
    }

    fn derivative(&self, rho: &[Complex64], out: &mut [Complex64]) {
        let n = self.n;
        let h = &self.hamiltonian;
        let i = Complex64::new(0.0, 1.0);
        for x in 0..n {
            for y in 0..n {
                let mut c = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    c += h[x * n + k] * rho[k * n + y] - rho[x * n + k] * h[k * n + y];
                }
                let mut d = -i * c;
                if x == y {
                    d -= self.relax[x] * rho[x * n + x];
                } else {
                    d -= 0.5 * (self.dephase[x] + self.dephase[y]) * rho[x * n + y];
                }
                out[x * n + y] = d;
            }
        }
        let gain: f64 = (1..n).map(|k| self.relax[k] * rho[k * n + k].re).sum();
        out[0] += gain;
    }

    /// Integrates from `rho0` with fixed step `step`, calling `observe(t, ρ)`
    /// at every multiple of `every` steps (including `t = 0`).
    pub fn evolve(
        &self,
        rho0: &[Complex64],
        step: f64,
        steps: usize,
        every: usize,
        mut observe: impl FnMut(f64, &[Complex64]),
    ) -> Result<Vec<Complex64>> {
        let n = self.n;
        let mut rho = rho0.to_vec();
        let mut work = Rk4Work::default();
        let mut f = |_t: f64, y: &[Complex64], dy: &mut [Complex64]| self.derivative(y, dy);
        observe(0.0, &rho);
        for s in 0..steps {
            let t = s as f64 * step;
            rk4_step(&mut f, t, &mut rho, step, &mut work);
            let trace: f64 = (0..n).map(|k| rho[k * n + k].re).sum();
            if (trace - 1.0).abs() > TRACE_TOL {
                return Err(Error::Integration(format!("trace drifted to {trace} at t = {} μs", t + step)));
            }
            if (0..n).any(|k| {
                let p = rho[k * n + k].re;
                !(-POSITIVITY_TOL..=1.0 + POSITIVITY_TOL).contains(&p)
            }) {
                return Err(Error::Integration(format!("population left [0, 1] at t = {} μs", t + step)));
            }
            if (s + 1) % every == 0 {
                observe(t + step, &rho);
            }
        }
        Ok(rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_relaxation() {
        let me = MasterEquation {
            n: 2,
            hamiltonian: vec![Complex64::new(0.0, 0.0); 4],
            relax: vec![0.0, 2.0],
            dephase: vec![0.0, 2.0],
        };
        let mut rho0 = vec![Complex64::new(0.0, 0.0); 4];
        rho0[3] = Complex64::new(1.0, 0.0);
        let rho = me.evolve(&rho0, 1e-3, 1000, 1000, |_, _| {}).unwrap();
        assert!((rho[3].re - (-2.0f64).exp()).abs() < 1e-12);
        assert!((rho[0].re + rho[3].re - 1.0).abs() < 1e-14);
    }
}
