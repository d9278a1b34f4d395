//! Open-ladder eigenstates and their decomposition into bulk modes.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bands::{characteristic_roots, BandParams, CharacteristicRoots};
use crate::error::{Error, Result};
use crate::model::{idx, HermitianMatrix, Leg};

/// Hermiticity tolerance accepted by [`diagonalize`], relative to the largest
/// matrix entry.
const HERMITIAN_TOL: f64 = 1e-12;

/// Gauge convention applied to every eigenvector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gauge {
    /// Largest-magnitude component real and positive; ties go to the lowest
    /// site index.
    LargestComponentReal,
}

/// Ascending energies `μ_n` and orthonormal eigenvectors `χ^{(n)}` (levels are
/// 0-based here: level 0 is the single-particle ground state).
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub energies: Vec<f64>,
    states: Vec<Vec<Complex64>>,
    pub gauge: Gauge,
    /// Largest coupling magnitude of the diagonalized matrix.
    pub coupling_scale: f64,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn state(&self, level: usize) -> &[Complex64] {
        &self.states[level]
    }

    pub fn ground_state(&self) -> &[Complex64] {
        &self.states[0]
    }

    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    /// `μ₂ − μ₁`, or infinity for a one-level system.
    pub fn ground_gap(&self) -> f64 {
        if self.energies.len() < 2 {
            f64::INFINITY
        } else {
            self.energies[1] - self.energies[0]
        }
    }

    /// Probability `|χ^{(n)}_{d,l}|²`.
    pub fn density(&self, level: usize, leg: Leg, rung: usize) -> f64 {
        self.states[level][idx(leg, rung)].norm_sqr()
    }
}

pub fn diagonalize(h: &HermitianMatrix) -> Result<EigenSystem> {
    let scale = h.max_abs();
    let asym = h.max_asymmetry();
    if asym > HERMITIAN_TOL * scale.max(1.0) {
        return Err(Error::NotHermitian(asym));
    }
    let n = h.dim();
    let eig = SymmetricEigen::new(h.to_dmatrix());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let energies = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let states = order
        .iter()
        .map(|&i| {
            let mut v: Vec<Complex64> = eig.eigenvectors.column(i).iter().copied().collect();
            fix_gauge(&mut v);
            v
        })
        .collect();
    Ok(EigenSystem { energies, states, gauge: Gauge::LargestComponentReal, coupling_scale: scale })
}

fn fix_gauge(v: &mut [Complex64]) {
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|z| *z /= norm);
    }
    let max = v.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let Some(pivot) = v.iter().position(|z| z.norm() >= max * (1.0 - 1e-12)) else {
        return;
    };
    let phase = v[pivot].conj() / v[pivot].norm();
    v.iter_mut().for_each(|z| *z *= phase);
    v[pivot] = Complex64::new(v[pivot].re, 0.0);
}

/// Coefficients `A_j` of one eigenstate in the basis of bulk modes at its own
/// energy.
#[derive(Debug, Clone)]
pub struct ModeExpansion {
    pub level: usize,
    pub params: BandParams,
    pub roots: CharacteristicRoots,
    /// Indices (into `roots.roots`) of the modes kept in the fit.
    pub used_roots: Vec<usize>,
    /// Coefficients in the unit-normalized basis, aligned with `used_roots`.
    pub coefficients: Vec<Complex64>,
    /// Root-mean-square misfit per site.
    pub residual: f64,
    /// Set when repeated roots forced a reduced basis.
    pub reduced_basis: bool,
    /// Normalized basis columns (length `2N` each), aligned with `used_roots`.
    basis: Vec<Vec<Complex64>>,
    /// Unnormalized l = 0 amplitudes `(ψ_{L,0}, ψ_{R,0})` scaled like the columns.
    origin: Vec<(Complex64, Complex64)>,
}

impl ModeExpansion {
    /// Rebuilds the fitted state from the basis.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let dim = self.basis.first().map_or(0, Vec::len);
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (col, a) in self.basis.iter().zip(&self.coefficients) {
            for (o, b) in out.iter_mut().zip(col) {
                *o += a * b;
            }
        }
        out
    }

    /// Contribution of mode `j` (position in `used_roots`) to each site.
    pub fn mode_component(&self, j: usize) -> Vec<Complex64> {
        self.basis[j].iter().map(|b| b * self.coefficients[j]).collect()
    }
}

/// Bulk mode `ψ_{d,l}(z)` on `l = 1..N`, before normalization. Large roots are
/// divided by `|z|^N` so that the column stays finite; the same factor is
/// applied to the returned `l = 0` amplitudes.
fn bulk_mode(z: Complex64, omega: f64, p: &BandParams, n: usize) -> (Vec<Complex64>, (Complex64, Complex64)) {
    let half = Complex64::from_polar(1.0, p.phi / 2.0);
    let psi_l0 = omega + p.g * (z * half + half.conj() / z);
    let psi_r0 = Complex64::new(-p.k, 0.0);
    let damp = if z.norm() > 1.0 { z.norm().powi(-(n as i32)) } else { 1.0 };
    let mut col = vec![Complex64::new(0.0, 0.0); 2 * n];
    let mut zl = Complex64::new(damp, 0.0);
    for l in 1..=n {
        zl *= z;
        let twist = Complex64::from_polar(1.0, p.phi * l as f64 / 2.0);
        col[idx(Leg::L, l)] = psi_l0 * zl * twist.conj();
        col[idx(Leg::R, l)] = psi_r0 * zl * twist;
    }
    (col, (psi_l0 * damp, psi_r0 * damp))
}

/// Least-squares fit of level `level` onto the four bulk modes at `μ_level`.
pub fn fit_mode_expansion(sys: &EigenSystem, level: usize, p: &BandParams) -> Result<ModeExpansion> {
    let chi = sys.state(level);
    let dim = chi.len();
    let n = dim / 2;
    let omega = sys.energies[level];
    let roots = characteristic_roots(omega, p)?;

    let mut used_roots = Vec::new();
    for j in 0..4 {
        if !used_roots.iter().any(|&i: &usize| (roots.roots[i] - roots.roots[j]).norm() < 1e-7) {
            used_roots.push(j);
        }
    }
    let mut reduced = used_roots.len() < 4;

    let mut basis = Vec::new();
    let mut origin = Vec::new();
    let mut kept = Vec::new();
    for &j in &used_roots {
        let (mut col, (l0, r0)) = bulk_mode(roots.roots[j], omega, p, n);
        let norm: f64 = col.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 1e-300) || !norm.is_finite() {
            reduced = true;
            continue;
        }
        col.iter_mut().for_each(|c| *c /= norm);
        basis.push(col);
        origin.push((l0 / norm, r0 / norm));
        kept.push(j);
    }
    if basis.is_empty() {
        return Err(Error::Fit { reason: "no usable bulk modes".into(), residual: f64::NAN });
    }

    let b = DMatrix::from_fn(dim, basis.len(), |r, c| basis[c][r]);
    let rhs = DVector::from_iterator(dim, chi.iter().copied());
    let svd = b.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if svd.singular_values.iter().any(|&s| s < 1e-10 * smax) {
        reduced = true;
    }
    let coeffs = svd.solve(&rhs, 1e-10 * smax).map_err(|e| Error::Fit { reason: e.to_string(), residual: f64::NAN })?;
    let misfit = &b * &coeffs - &rhs;
    let residual = (misfit.norm_squared() / dim as f64).sqrt();

    Ok(ModeExpansion {
        level,
        params: *p,
        roots,
        used_roots: kept,
        coefficients: coeffs.iter().copied().collect(),
        residual,
        reduced_basis: reduced,
        basis,
        origin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiRow {
    pub leg: Leg,
    /// `q_j − φ/2` on leg L, `q_j + φ/2` on leg R.
    pub q: f64,
    pub intensity: f64,
}

/// Quasimomentum content of an eigenstate, one row per transmission root and
/// leg, intensities rescaled to a maximum of 1.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuasimomentumMap {
    pub rows: Vec<QuasiRow>,
}

pub fn quasimomentum_map(exp: &ModeExpansion) -> QuasimomentumMap {
    let half = exp.params.phi / 2.0;
    let mut rows = Vec::new();
    for (pos, &j) in exp.used_roots.iter().enumerate() {
        if !exp.roots.is_transmission(j) {
            continue;
        }
        let q = exp.roots.quasimomentum(j);
        let a = exp.coefficients[pos];
        let (l0, r0) = exp.origin[pos];
        rows.push(QuasiRow { leg: Leg::L, q: q - half, intensity: (a * l0).norm() });
        rows.push(QuasiRow { leg: Leg::R, q: q + half, intensity: (a * r0).norm() });
    }
    let max = rows.iter().fold(0.0f64, |m, r| m.max(r.intensity));
    if max > 0.0 {
        rows.iter_mut().for_each(|r| r.intensity /= max);
    }
    QuasimomentumMap { rows }
}
