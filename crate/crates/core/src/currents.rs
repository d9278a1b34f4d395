//! Particle currents, chiral current, vortex counting and (φ, K) sweeps.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigensolve::diagonalize;
use crate::error::{Error, Result};
use crate::model::{build_open_ladder, idx, LadderConfig, Leg};

/// Directed link currents of one single-excitation state.
///
/// `leg_links[d][l-1]` flows from `(d,l)` to `(d,l+1)`; `rungs[l-1]` flows from
/// `(L,l)` to `(R,l)`. In physical units values are rates in μs⁻¹.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurrentField {
    pub n_rungs: usize,
    pub leg_links: [Vec<f64>; 2],
    pub rungs: Vec<f64>,
    /// `|χ_{d,l}|²` in site-index order.
    pub densities: Vec<f64>,
}

impl CurrentField {
    pub fn zeros(n_rungs: usize) -> Self {
        let links = n_rungs.saturating_sub(1);
        Self {
            n_rungs,
            leg_links: [vec![0.0; links], vec![0.0; links]],
            rungs: vec![0.0; n_rungs],
            densities: vec![0.0; 2 * n_rungs],
        }
    }

    /// Current from `(leg, l)` to `(leg, l+1)`.
    pub fn leg(&self, leg: Leg, l: usize) -> f64 {
        self.leg_links[leg as usize][l - 1]
    }

    /// Current from `(L, l)` to `(R, l)`.
    pub fn rung(&self, l: usize) -> f64 {
        self.rungs[l - 1]
    }

    pub fn max_abs(&self) -> f64 {
        self.leg_links.iter().flatten().chain(&self.rungs).fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.leg_links.iter_mut().flatten().for_each(|v| *v *= s);
        out.rungs.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// Net current flowing into every site, in site-index order.
    pub fn net_inflow(&self) -> Vec<f64> {
        let n = self.n_rungs;
        let mut net = vec![0.0; 2 * n];
        for leg in [Leg::L, Leg::R] {
            for l in 1..n {
                let j = self.leg(leg, l);
                net[idx(leg, l)] -= j;
                net[idx(leg, l + 1)] += j;
            }
        }
        for l in 1..=n {
            net[idx(Leg::L, l)] -= self.rung(l);
            net[idx(Leg::R, l)] += self.rung(l);
        }
        net
    }
}

pub fn link_currents(state: &[Complex64], cfg: &LadderConfig) -> Result<CurrentField> {
    let n = cfg.n_rungs;
    if state.len() != 2 * n {
        return Err(Error::Dimension { expected: 2 * n, got: state.len() });
    }
    let s = cfg.units.rate_scale();
    let mut field = CurrentField::zeros(n);
    for leg in [Leg::L, Leg::R] {
        for l in 1..n {
            let a = state[idx(leg, l + 1)].conj() * state[idx(leg, l)];
            field.leg_links[leg as usize][l - 1] = -2.0 * s * cfg.g * a.im;
        }
    }
    for l in 1..=n {
        let a = state[idx(Leg::R, l)].conj() * state[idx(Leg::L, l)] * cfg.rung_phase(l);
        field.rungs[l - 1] = -2.0 * s * cfg.k * a.im;
    }
    field.densities = state.iter().map(|c| c.norm_sqr()).collect();
    Ok(field)
}

/// `j_C = j_L − j_R` with each leg current averaged over its `N − 1` links.
pub fn chiral_current(field: &CurrentField) -> Result<f64> {
    if field.n_rungs < 2 {
        return Err(Error::Domain("chiral current needs at least two rungs".into()));
    }
    let links = (field.n_rungs - 1) as f64;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / links;
    Ok(mean(&field.leg_links[0]) - mean(&field.leg_links[1]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VortexCount {
    pub n_v: usize,
    pub d_v: f64,
}

/// Threshold used for vortex counting when none is given: `1e−6 · max|j|`.
pub fn default_vortex_eps(field: &CurrentField) -> f64 {
    1e-6 * field.max_abs()
}

/// Counts plaquettes whose four links circulate in one direction, each with
/// magnitude above `eps`. A field with no such plaquette but a nonzero
/// circulation around the ladder boundary counts as one vortex.
pub fn count_vortices(field: &CurrentField, eps: f64) -> Result<VortexCount> {
    if !(eps > 0.0) {
        return Err(Error::Domain("eps must be > 0".into()));
    }
    let n = field.n_rungs;
    let mut n_v = 0;
    for l in 1..n {
        let loop_links = [field.leg(Leg::L, l), field.rung(l + 1), -field.leg(Leg::R, l), -field.rung(l)];
        let strong = loop_links.iter().all(|v| v.abs() > eps);
        let same = loop_links.iter().all(|&v| v > 0.0) || loop_links.iter().all(|&v| v < 0.0);
        if strong && same {
            n_v += 1;
        }
    }
    if n_v == 0 && n >= 2 {
        let boundary = field.leg_links[0].iter().sum::<f64>() - field.leg_links[1].iter().sum::<f64>() + field.rung(n)
            - field.rung(1);
        if boundary.abs() > eps {
            n_v = 1;
        }
    }
    Ok(VortexCount { n_v, d_v: n_v as f64 / n as f64 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseCell {
    pub phi: f64,
    pub k: f64,
    pub j_chiral: f64,
    pub n_vortices: usize,
    pub vortex_density: f64,
    /// Ground level degenerate within `1e−8 · g`.
    pub degenerate: bool,
}

/// Ground-state observables on a rectangular `(φ, K)` grid, stored φ-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagram {
    pub phi_grid: Vec<f64>,
    pub k_grid: Vec<f64>,
    pub cells: Vec<PhaseCell>,
}

impl PhaseDiagram {
    pub fn cell(&self, i_phi: usize, i_k: usize) -> &PhaseCell {
        &self.cells[i_phi * self.k_grid.len() + i_k]
    }

    /// `(K, j_C)` at fixed φ index.
    pub fn k_slice(&self, i_phi: usize) -> Vec<(f64, f64)> {
        (0..self.k_grid.len()).map(|i| (self.k_grid[i], self.cell(i_phi, i).j_chiral)).collect()
    }

    /// `(φ, j_C)` at fixed K index.
    pub fn phi_slice(&self, i_k: usize) -> Vec<(f64, f64)> {
        (0..self.phi_grid.len()).map(|i| (self.phi_grid[i], self.cell(i, i_k).j_chiral)).collect()
    }
}

/// Ground-state chiral current and vortex count of one configuration.
pub fn ground_state_cell(cfg: &LadderConfig) -> Result<PhaseCell> {
    let sys = diagonalize(&build_open_ladder(cfg)?)?;
    let field = link_currents(sys.ground_state(), cfg)?;
    let j_chiral = chiral_current(&field)?;
    let eps = default_vortex_eps(&field);
    let count = if eps > 0.0 { count_vortices(&field, eps)? } else { VortexCount { n_v: 0, d_v: 0.0 } };
    Ok(PhaseCell {
        phi: cfg.phi,
        k: cfg.k,
        j_chiral,
        n_vortices: count.n_v,
        vortex_density: count.d_v,
        degenerate: sys.ground_gap() < 1e-8 * cfg.g,
    })
}

/// Sweeps the grid in parallel on the current rayon pool; cell order follows
/// the grid regardless of scheduling.
pub fn phase_diagram(template: &LadderConfig, phi_grid: &[f64], k_grid: &[f64]) -> Result<PhaseDiagram> {
    if phi_grid.is_empty() || k_grid.is_empty() {
        return Err(Error::Domain("phase diagram grids must be nonempty".into()));
    }
    let nk = k_grid.len();
    let cells = (0..phi_grid.len() * nk)
        .into_par_iter()
        .map(|i| ground_state_cell(&template.with_phi(phi_grid[i / nk]).with_k(k_grid[i % nk])))
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseDiagram { phi_grid: phi_grid.to_vec(), k_grid: k_grid.to_vec(), cells })
}

/// Locates the kink of a curve that varies up to some `K_b` and is flat
/// beyond, by least-squares fitting `a + b·min(K, K_b)` over a fine scan of
/// `K_b`.
pub fn locate_kink(samples: &[(f64, f64)]) -> Option<f64> {
    if samples.len() < 4 {
        return None;
    }
    let (lo, hi) = (samples[0].0, samples[samples.len() - 1].0);
    let scan = 40 * samples.len();
    let mut best: Option<(f64, f64)> = None;
    for s in 1..scan {
        let kb = lo + (hi - lo) * s as f64 / scan as f64;
        let sse = hinge_sse(samples, kb);
        if best.is_none_or(|(_, e)| sse < e) {
            best = Some((kb, sse));
        }
    }
    best.map(|(kb, _)| kb)
}

fn hinge_sse(samples: &[(f64, f64)], kb: f64) -> f64 {
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|&(k, _)| k.min(kb)).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = samples.iter().map(|s| s.1).sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(samples).map(|(x, s)| (x - mx) * (s.1 - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    xs.iter().zip(samples).map(|(x, s)| (s.1 - my - b * (x - mx)).powi(2)).sum()
}
