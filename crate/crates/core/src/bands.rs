//! Band structure of the infinite ladder.
//!
//! With the plane-wave ansatz `ψ_{L,l} ∝ z^l e^{-iφl/2}`, `ψ_{R,l} ∝ z^l e^{iφl/2}`
//! the bulk recurrence closes on two bands. On the unit circle `z = e^{iq}`:
//!
//! ```text
//! ω±(q) = −2g cos q cos(φ/2) ± sqrt(K² + 4g² sin²q sin²(φ/2))
//! ```
//!
//! At fixed energy the same relation is a quadratic in `R = z + 1/z`, whose two
//! solutions `R∓` each give a reciprocal pair of roots `z`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::LadderConfig;

/// Tolerance on `||z| − 1|` separating transmission roots from decay roots.
pub const TRANSMISSION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandParams {
    pub g: f64,
    pub k: f64,
    pub phi: f64,
}

impl BandParams {
    pub fn new(g: f64, k: f64, phi: f64) -> Self {
        Self { g, k, phi }
    }
}

impl From<&LadderConfig> for BandParams {
    fn from(cfg: &LadderConfig) -> Self {
        Self { g: cfg.g, k: cfg.k, phi: cfg.phi }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

pub fn band_energy(q: f64, branch: Branch, p: &BandParams) -> f64 {
    let (s, c) = (p.phi / 2.0).sin_cos();
    let kinetic = -2.0 * p.g * q.cos() * c;
    let split = (p.k * p.k + 4.0 * p.g * p.g * q.sin().powi(2) * s * s).sqrt();
    match branch {
        Branch::Plus => kinetic + split,
        Branch::Minus => kinetic - split,
    }
}

/// Number of minima of the lower band over `(−π, π]`.
///
/// Strict local minima are located on a uniform periodic grid, refined by
/// golden-section search inside their brackets, and merged when the refined
/// positions coincide.
pub fn minima_count(p: &BandParams, grid_size: usize) -> Result<usize> {
    if grid_size < 512 {
        return Err(Error::Domain(format!("grid_size {grid_size} < 512")));
    }
    let m = grid_size;
    let step = std::f64::consts::TAU / m as f64;
    let q_at = |i: usize| -std::f64::consts::PI + step * (i + 1) as f64;
    let f = |q: f64| band_energy(q, Branch::Minus, p);
    let values: Vec<f64> = (0..m).map(|i| f(q_at(i))).collect();

    let mut refined: Vec<f64> = Vec::new();
    for i in 0..m {
        let prev = values[(i + m - 1) % m];
        let next = values[(i + 1) % m];
        if values[i] < prev && values[i] < next {
            let centre = q_at(i);
            let q = golden_section(&f, centre - step, centre + step, 1e-12);
            refined.push(wrap_angle(q));
        }
    }
    let mut distinct: Vec<f64> = Vec::new();
    for q in refined {
        if !distinct.iter().any(|&d| angle_distance(d, q) < 1e-6) {
            distinct.push(q);
        }
    }
    Ok(distinct.len().clamp(1, 2))
}

fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

fn wrap_angle(q: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut w = (q + std::f64::consts::PI).rem_euclid(tau) - std::f64::consts::PI;
    if w <= -std::f64::consts::PI {
        w += tau;
    }
    w
}

fn angle_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

/// Critical rung coupling `K_c = 2g tan(φ/2) sin(φ/2)` separating the vortex
/// (`K < K_c`) and Meissner (`K ≥ K_c`) regimes.
pub fn critical_coupling(g: f64, phi: f64) -> Result<f64> {
    if !(phi.abs() < std::f64::consts::PI) {
        return Err(Error::Domain(format!("critical coupling diverges at phi = {phi}")));
    }
    let half = phi / 2.0;
    Ok(2.0 * g * half.tan() * half.sin())
}

/// Upper bound `Λ` on `|z|` for the (staggered) decay roots.
pub fn decay_bound_lambda(p: &BandParams) -> Result<f64> {
    let s = (p.phi / 2.0).sin().abs();
    if s == 0.0 {
        return Err(Error::Domain("decay bound undefined at phi = 0".into()));
    }
    let a = p.k / (2.0 * p.g * s);
    Ok(a + (a * a + 1.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootKind {
    /// `|z| = 1`: a propagating plane wave.
    Transmission,
    /// Real positive `z`.
    Decay,
    /// Real negative `z`.
    StaggeredDecay,
}

/// The four roots `z₁…z₄` of the bulk recurrence at a fixed energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicRoots {
    pub omega: f64,
    /// `z₁, z₂` come from `R₋`, `z₃, z₄` from `R₊`.
    pub roots: [Complex64; 4],
    pub r_minus: f64,
    pub r_plus: f64,
    pub kinds: [RootKind; 4],
}

impl CharacteristicRoots {
    /// Principal argument `q_j = Arg z_j`.
    pub fn quasimomentum(&self, j: usize) -> f64 {
        self.roots[j].arg()
    }

    pub fn is_transmission(&self, j: usize) -> bool {
        self.kinds[j] == RootKind::Transmission
    }

    /// Whether two of the four roots coincide (band edges, `|R| = 2`, or
    /// `R₋ = R₊`).
    pub fn has_repeated_root(&self, tol: f64) -> bool {
        (0..4).any(|i| (i + 1..4).any(|j| (self.roots[i] - self.roots[j]).norm() < tol))
    }
}

/// Solves `ω = ω(z)` for the four characteristic roots.
pub fn characteristic_roots(omega: f64, p: &BandParams) -> Result<CharacteristicRoots> {
    let (s, c) = (p.phi / 2.0).sin_cos();
    let w = omega / p.g;
    let kg = p.k / p.g;
    let disc = -w * w * s * s + kg * kg + 4.0 * s * s;
    if disc < 0.0 {
        return Err(Error::OutsideBand(omega));
    }
    let root = disc.sqrt();
    let r_minus = -w * c - root;
    let r_plus = -w * c + root;
    let (z1, z2) = reciprocal_pair(r_minus);
    let (z3, z4) = reciprocal_pair(r_plus);
    let roots = [z1, z2, z3, z4];
    let kinds = roots.map(classify);
    Ok(CharacteristicRoots { omega, roots, r_minus, r_plus, kinds })
}

/// Roots of `z² − Rz + 1 = 0` ordered as `((R − √(R²−4))/2, (R + √(R²−4))/2)`.
fn reciprocal_pair(r: f64) -> (Complex64, Complex64) {
    let d = r * r - 4.0;
    if d <= 0.0 {
        let im = (-d).sqrt() / 2.0;
        let re = r / 2.0;
        (Complex64::new(re, -im), Complex64::new(re, im))
    } else {
        // Larger-magnitude root first, the other from z·z' = 1.
        let big = (r + r.signum() * d.sqrt()) / 2.0;
        let small = 1.0 / big;
        if r > 0.0 {
            (Complex64::new(small, 0.0), Complex64::new(big, 0.0))
        } else {
            (Complex64::new(big, 0.0), Complex64::new(small, 0.0))
        }
    }
}

fn classify(z: Complex64) -> RootKind {
    if (z.norm() - 1.0).abs() < TRANSMISSION_TOL {
        RootKind::Transmission
    } else if z.re > 0.0 {
        RootKind::Decay
    } else {
        RootKind::StaggeredDecay
    }
}

/// Samples both bands on `samples` points over `[−π, π]`.
pub fn band_table(p: &BandParams, samples: usize) -> Vec<(f64, f64, f64)> {
    let n = samples.max(2);
    (0..n)
        .map(|i| {
            let q = -std::f64::consts::PI + std::f64::consts::TAU * i as f64 / (n - 1) as f64;
            (q, band_energy(q, Branch::Minus, p), band_energy(q, Branch::Plus, p))
        })
        .collect()
}
