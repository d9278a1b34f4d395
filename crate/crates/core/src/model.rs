//! Ladder configuration, site indexing and Hamiltonian assembly.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ladder leg. The first row of qubits is `L`, the second `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Leg {
    L,
    R,
}

impl Leg {
    pub fn other(self) -> Leg {
        match self {
            Leg::L => Leg::R,
            Leg::R => Leg::L,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Leg::L => "L",
            Leg::R => "R",
        }
    }
}

/// A ladder site `(leg, rung)` with rungs counted from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SiteId {
    pub leg: Leg,
    pub rung: usize,
}

impl SiteId {
    pub fn new(leg: Leg, rung: usize) -> Self {
        Self { leg, rung }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    /// Couplings measured in units of `g`; `g` is exactly 1.
    #[default]
    Dimensionless,
    /// Couplings are ordinary frequencies in MHz, times in μs.
    PhysicalMhz,
}

impl Units {
    /// Factor turning a coupling into the rate at which it moves population.
    ///
    /// In physical units couplings are ordinary frequencies, so rates carry a
    /// factor `2π` and come out in μs⁻¹.
    pub fn rate_scale(self) -> f64 {
        match self {
            Units::Dimensionless => 1.0,
            Units::PhysicalMhz => std::f64::consts::TAU,
        }
    }
}

/// Parameters of the open ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderConfig {
    pub n_rungs: usize,
    /// Intraleg coupling.
    pub g: f64,
    /// Interleg (rung) coupling.
    pub k: f64,
    /// Flux per plaquette in radians.
    pub phi: f64,
    pub units: Units,
}

impl LadderConfig {
    pub fn new(n_rungs: usize, g: f64, k: f64, phi: f64, units: Units) -> Self {
        Self { n_rungs, g, k, phi, units }
    }

    /// Dimensionless ladder with `g = 1`.
    pub fn dimensionless(n_rungs: usize, k: f64, phi: f64) -> Self {
        Self::new(n_rungs, 1.0, k, phi, Units::Dimensionless)
    }

    pub fn physical(n_rungs: usize, g_mhz: f64, k_mhz: f64, phi: f64) -> Self {
        Self::new(n_rungs, g_mhz, k_mhz, phi, Units::PhysicalMhz)
    }

    pub fn dim(&self) -> usize {
        2 * self.n_rungs
    }

    pub fn with_phi(self, phi: f64) -> Self {
        Self { phi, ..self }
    }

    pub fn with_k(self, k: f64) -> Self {
        Self { k, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        validate_config(self)
    }

    /// Phase factor `e^{iφl}` carried by the rung at `rung`.
    pub fn rung_phase(&self, rung: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.phi * rung as f64)
    }
}

/// Returns every violated invariant of `config`, naming the field.
pub fn validate_config(config: &LadderConfig) -> Result<()> {
    let mut errors = Vec::new();
    if config.n_rungs < 1 {
        errors.push("n_rungs must be ≥ 1".to_string());
    }
    if !(config.g > 0.0) || !config.g.is_finite() {
        errors.push("g must be > 0".to_string());
    }
    if !(config.k >= 0.0) || !config.k.is_finite() {
        errors.push("k must be ≥ 0".to_string());
    }
    if !(config.phi >= -PI && config.phi <= PI) {
        errors.push("phi must lie in [-π, π]".to_string());
    }
    if config.units == Units::Dimensionless && config.g > 0.0 && config.g != 1.0 {
        errors.push("g must be exactly 1 in dimensionless units".to_string());
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(Error::Config(errors))
    }
}

/// Maps a site onto `0..2N`: `(L,l) → 2(l−1)`, `(R,l) → 2(l−1)+1`.
pub fn site_index(site: SiteId, n_rungs: usize) -> Result<usize> {
    if site.rung < 1 || site.rung > n_rungs {
        return Err(Error::Domain(format!("rung {} outside 1..={}", site.rung, n_rungs)));
    }
    let base = 2 * (site.rung - 1);
    Ok(match site.leg {
        Leg::L => base,
        Leg::R => base + 1,
    })
}

/// Inverse of [`site_index`].
pub fn site_of_index(index: usize) -> SiteId {
    let rung = index / 2 + 1;
    let leg = if index.is_multiple_of(2) { Leg::L } else { Leg::R };
    SiteId { leg, rung }
}

#[inline]
pub(crate) fn idx(leg: Leg, rung: usize) -> usize {
    2 * (rung - 1) + usize::from(leg == Leg::R)
}

/// Dense Hermitian matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    /// Wraps raw row-major entries. Hermiticity is not checked here; see
    /// [`HermitianMatrix::max_asymmetry`].
    pub fn from_row_major(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Dimension { expected: dim * dim, got: entries.len() });
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    /// Sets `(i, j)` to `value` and `(j, i)` to its conjugate.
    pub fn set_hermitian(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i * self.dim + j] = value;
        self.entries[j * self.dim + i] = value.conj();
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn conj(&self) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|z| z.conj()).collect() }
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| self.entries[i * self.dim..(i + 1) * self.dim].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.entries)
    }
}

/// Assembles the single-excitation Hamiltonian of the open ladder.
///
/// Intraleg links carry `−g`; the rung at `l` carries `⟨R,l|H|L,l⟩ = −K e^{iφl}`.
pub fn build_open_ladder(config: &LadderConfig) -> Result<HermitianMatrix> {
    validate_config(config)?;
    let n = config.n_rungs;
    let mut h = HermitianMatrix::zeros(2 * n);
    let hop = Complex64::new(-config.g, 0.0);
    for l in 1..n {
        for leg in [Leg::L, Leg::R] {
            h.set_hermitian(idx(leg, l + 1), idx(leg, l), hop);
        }
    }
    for l in 1..=n {
        h.set_hermitian(idx(Leg::R, l), idx(Leg::L, l), -config.k * config.rung_phase(l));
    }
    Ok(h)
}
