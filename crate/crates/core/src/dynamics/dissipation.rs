use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-site relaxation `γ_{d,l}` and dephasing `Γ_{d,l}` (MHz), in
/// site-index order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissipationSpec {
    pub relaxation: Vec<f64>,
    pub dephasing: Vec<f64>,
}

impl DissipationSpec {
    pub fn homogeneous(n_rungs: usize, gamma: f64, dephasing: f64) -> Self {
        Self { relaxation: vec![gamma; 2 * n_rungs], dephasing: vec![dephasing; 2 * n_rungs] }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        for v in [&self.relaxation, &self.dephasing] {
            if v.len() != dim {
                return Err(Error::Dimension { expected: dim, got: v.len() });
            }
        }
        if self.relaxation.iter().chain(&self.dephasing).any(|&r| !(r >= 0.0) || !r.is_finite()) {
            return Err(Error::Config(vec!["dissipation rates must be ≥ 0".into()]));
        }
        Ok(())
    }

    /// Collective rates `(γ₁, Γ₁) = Σ |χ|² (γ, Γ)` of a normalized state.
    pub fn collective(&self, state: &[Complex64]) -> Result<(f64, f64)> {
        self.validate(state.len())?;
        let w = |rates: &[f64]| state.iter().zip(rates).map(|(c, r)| c.norm_sqr() * r).sum::<f64>();
        Ok((w(&self.relaxation), w(&self.dephasing)))
    }
}
