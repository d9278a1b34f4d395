//! Configuration file, environment and flag resolution.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::DissipationSpec;
use crate::error::{Error, Result};
use crate::floquet::DriveSpec;
use crate::model::{LadderConfig, Units};

/// Environment variable naming the output directory.
pub const OUT_DIR_ENV: &str = "FLUXLADDER_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DriveSection {
    pub omega1_mhz: f64,
    pub omega2_mhz: f64,
    pub delta1_mhz: f64,
    pub delta2_mhz: f64,
    pub phi0_over_pi: f64,
    pub phi_over_pi: f64,
    pub omega_l_mhz: f64,
    pub omega_r_mhz: f64,
    pub g0_mhz: f64,
    pub k0_mhz: f64,
}

impl Default for DriveSection {
    fn default() -> Self {
        let r = DriveSpec::reference(PI / 2.0, PI / 2.0);
        Self {
            omega1_mhz: r.omega1,
            omega2_mhz: r.omega2,
            delta1_mhz: r.delta1,
            delta2_mhz: r.delta2,
            phi0_over_pi: 0.5,
            phi_over_pi: 0.5,
            omega_l_mhz: r.omega_l,
            omega_r_mhz: r.omega_r,
            g0_mhz: r.g0,
            k0_mhz: r.k0,
        }
    }
}

impl DriveSection {
    pub fn spec(&self) -> DriveSpec {
        DriveSpec {
            omega1: self.omega1_mhz,
            omega2: self.omega2_mhz,
            delta1: self.delta1_mhz,
            delta2: self.delta2_mhz,
            phi0: self.phi0_over_pi * PI,
            phi: self.phi_over_pi * PI,
            omega_l: self.omega_l_mhz,
            omega_r: self.omega_r_mhz,
            g0: self.g0_mhz,
            k0: self.k0_mhz,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DissipationSection {
    pub gamma_mhz: f64,
    pub dephasing_mhz: f64,
}

impl Default for DissipationSection {
    fn default() -> Self {
        Self { gamma_mhz: 0.05, dephasing_mhz: 0.1 }
    }
}

impl DissipationSection {
    pub fn spec(&self, n_rungs: usize) -> DissipationSpec {
        DissipationSpec::homogeneous(n_rungs, self.gamma_mhz, self.dephasing_mhz)
    }
}

/// Contents of a configuration document. Every key is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub n_rungs: usize,
    pub g_mhz: f64,
    pub k_mhz: f64,
    pub phi_over_pi: f64,
    pub units: Units,
    #[serde(skip_serializing)]
    pub out_dir: Option<PathBuf>,
    pub drive: DriveSection,
    pub dissipation: DissipationSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_rungs: 20,
            g_mhz: 1.0,
            k_mhz: 0.5,
            phi_over_pi: 0.5,
            units: Units::Dimensionless,
            out_dir: None,
            drive: DriveSection::default(),
            dissipation: DissipationSection::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(vec![e.message().to_string()]))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_toml(&text)
    }

    pub fn ladder(&self) -> LadderConfig {
        LadderConfig::new(self.n_rungs, self.g_mhz, self.k_mhz, self.phi_over_pi * PI, self.units)
    }

    /// The ladder with couplings read as MHz.
    pub fn physical_ladder(&self) -> LadderConfig {
        LadderConfig { units: Units::PhysicalMhz, ..self.ladder() }
    }

    /// Every violated invariant of the ladder, drive and dissipation sections.
    pub fn validate(&self) -> Result<()> {
        let mut errors = Vec::new();
        if let Err(Error::Config(list)) = self.ladder().validate() {
            errors.extend(list);
        }
        if let Err(Error::Config(list)) = self.drive.spec().validate() {
            errors.extend(list.into_iter().map(|e| format!("drive: {e}")));
        }
        if let Err(Error::Config(list)) = self.dissipation.spec(self.n_rungs.max(1)).validate(2 * self.n_rungs.max(1)) {
            errors.extend(list);
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errors))
        }
    }
}

/// Output directory: flag, then environment, then file, then `.`.
pub fn resolve_out_dir(flag: Option<&Path>, env: Option<&str>, file: Option<&Path>) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| env.filter(|s| !s.is_empty()).map(PathBuf::from))
        .or_else(|| file.map(Path::to_path_buf))
        .unwrap_or_else(|| PathBuf::from("."))
}
