//! The `fluxladder` command line.
//!
//! Exit codes: 0 on success, 1 for usage or configuration errors, 2 for
//! numerical failures.

pub mod commands;
pub mod config;
pub mod emit;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use config::{RunConfig, OUT_DIR_ENV};
pub use emit::{emit_csv, format_float, Cell, Table};

use crate::error::{Error, Result};
use crate::model::Units;

#[derive(Debug, Parser)]
#[command(name = "fluxladder", version, about = "Two-leg flux ladder simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitsArg {
    Dimensionless,
    PhysicalMhz,
}

impl From<UnitsArg> for Units {
    fn from(u: UnitsArg) -> Self {
        match u {
            UnitsArg::Dimensionless => Units::Dimensionless,
            UnitsArg::PhysicalMhz => Units::PhysicalMhz,
        }
    }
}

/// Options shared by every subcommand. Flags override the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// TOML configuration document.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides $FLUXLADDER_OUT_DIR and the file).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Worker threads for sweeps; defaults to all cores.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n_rungs: Option<usize>,
    /// Intraleg coupling.
    #[arg(long = "g", visible_alias = "g-mhz")]
    pub g: Option<f64>,
    /// Interleg coupling.
    #[arg(long = "k", visible_alias = "k-mhz")]
    pub k: Option<f64>,
    #[arg(long)]
    pub phi_over_pi: Option<f64>,
    #[arg(long, value_enum)]
    pub units: Option<UnitsArg>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Infinite-ladder dispersion.
    Bands {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
    /// Open-ladder spectrum, one eigenstate and its quasimomentum content.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Level to export, counted from 1.
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
    /// Link currents of one eigenstate.
    Currents {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
    /// Ground-state chiral current and vortex density over a (φ, K) grid.
    PhaseDiagram {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 64)]
        phi_steps: usize,
        #[arg(long, default_value_t = 64)]
        k_steps: usize,
        #[arg(long, default_value_t = 3.0)]
        k_max: f64,
    },
    /// Vortex density against φ at the configured K.
    VortexDensity {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 64)]
        phi_steps: usize,
    },
    /// Drive-derived modulation, renormalized couplings and the K(φ₀) curve.
    Drive {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 65)]
        phi0_steps: usize,
    },
    /// Compare the modulated ladder against its effective model.
    FloquetValidate {
        #[command(flatten)]
        common: Common,
        /// Rungs of the validation ladder (at most 3).
        #[arg(long, default_value_t = 2)]
        rungs: usize,
        /// Horizon in μs; defaults to 3/g₀.
        #[arg(long)]
        horizon_us: Option<f64>,
    },
    /// Ground-state generation: π-pulse duration and fidelity.
    Generate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        c1_mhz: f64,
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
    /// Simulated current measurement on a site pair and its fit.
    Measure {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = PairKind::Intraleg)]
        pair: PairKind,
        #[arg(long, value_enum, default_value_t = LegArg::L)]
        leg: LegArg,
        /// Rung of the pair; defaults to N/2.
        #[arg(long)]
        rung: Option<usize>,
        /// Trace length in Rabi periods.
        #[arg(long, default_value_t = 3.0)]
        periods: f64,
        #[arg(long, default_value_t = 2001)]
        samples: usize,
        /// Standard deviation of additive Gaussian noise.
        #[arg(long)]
        noise_sigma: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    Intraleg,
    Rung,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum LegArg {
    L,
    R,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bands { .. } => "bands",
            Command::Spectrum { .. } => "spectrum",
            Command::Currents { .. } => "currents",
            Command::PhaseDiagram { .. } => "phase-diagram",
            Command::VortexDensity { .. } => "vortex-density",
            Command::Drive { .. } => "drive",
            Command::FloquetValidate { .. } => "floquet-validate",
            Command::Generate { .. } => "generate",
            Command::Measure { .. } => "measure",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Bands { common, .. }
            | Command::Spectrum { common, .. }
            | Command::Currents { common, .. }
            | Command::PhaseDiagram { common, .. }
            | Command::VortexDensity { common, .. }
            | Command::Drive { common, .. }
            | Command::FloquetValidate { common, .. }
            | Command::Generate { common, .. }
            | Command::Measure { common, .. } => common,
        }
    }
}

/// Record of one run, written next to its outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    pub outputs: Vec<String>,
}

/// Applies file values, then flags, on top of the defaults.
pub fn resolve_config(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(n) = common.n_rungs {
        cfg.n_rungs = n;
    }
    if let Some(g) = common.g {
        cfg.g_mhz = g;
    }
    if let Some(k) = common.k {
        cfg.k_mhz = k;
    }
    if let Some(p) = common.phi_over_pi {
        cfg.phi_over_pi = p;
    }
    if let Some(u) = common.units {
        cfg.units = u.into();
    }
    Ok(cfg)
}

fn execute(cmd: &Command, env_out: Option<&str>) -> Result<Vec<String>> {
    let common = cmd.common();
    let mut cfg = resolve_config(common)?;
    if matches!(cmd, Command::Generate { .. } | Command::Measure { .. }) {
        cfg.units = Units::PhysicalMhz;
    }
    cfg.validate()?;
    if common.threads == Some(0) {
        return Err(Error::Config(vec!["threads must be ≥ 1".into()]));
    }
    let out_dir = config::resolve_out_dir(common.out_dir.as_deref(), env_out, cfg.out_dir.as_deref());

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = common.threads {
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| Error::Config(vec![e.to_string()]))?;
    let output = pool.install(|| commands::dispatch(cmd, &cfg))?;

    let mut names: Vec<String> = output.files.iter().map(|(n, _)| n.clone()).collect();
    names.push("manifest.json".into());
    let mut snapshot = serde_json::to_value(&cfg).expect("config serializes");
    if let (Some(obj), serde_json::Value::Object(extra)) = (snapshot.as_object_mut(), output.params) {
        obj.extend(extra);
    }
    let manifest = RunManifest {
        command: cmd.name().to_string(),
        config: snapshot,
        seed: common.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: names.clone(),
    };
    let mut manifest_text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    manifest_text.push('\n');

    for (name, body) in &output.files {
        emit::write_atomic(&out_dir.join(name), body)?;
    }
    emit::write_atomic(&out_dir.join("manifest.json"), manifest_text.as_bytes())?;
    for line in &output.summary {
        println!("{line}");
    }
    Ok(names.iter().map(|n| out_dir.join(n).display().to_string()).collect())
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let env_out = std::env::var(OUT_DIR_ENV).ok();
    match execute(&cli.command, env_out.as_deref()) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                1
            } else {
                2
            }
        }
    }
}
