//! Subcommand bodies. Each returns its files in memory so that nothing is
//! written unless the whole computation succeeds.

use std::f64::consts::PI;

use serde_json::{json, Value};

use super::config::RunConfig;
use super::emit::{Cell, Table};
use super::{Command, LegArg, PairKind};
use crate::bands::{band_table, critical_coupling, minima_count, BandParams};
use crate::currents::{chiral_current, count_vortices, default_vortex_eps, link_currents, phase_diagram, PhaseDiagram};
use crate::dynamics::{
    excitation_overlaps, extract_current, fidelity_exact, fidelity_strong_coupling, generation_plan,
    simulate_measurement, FitKnowns, MeasurementPair, NoiseSpec, FIT_WINDOW_PERIODS,
};
use crate::eigensolve::{diagonalize, fit_mode_expansion, quasimomentum_map, EigenSystem};
use crate::error::{Error, Result};
use crate::floquet::{
    interleg_tuning_curve, renormalized_couplings, stark_and_modulation, validate_effective_model, LevelScheme,
    Transition,
};
use crate::model::{build_open_ladder, site_of_index, LadderConfig, Leg};

#[derive(Debug, Default)]
pub struct Output {
    pub files: Vec<(String, Vec<u8>)>,
    /// Subcommand parameters recorded in the manifest.
    pub params: Value,
    pub summary: Vec<String>,
}

impl Output {
    fn csv(&mut self, name: &str, table: &Table) {
        self.files.push((name.to_string(), table.to_csv().into_bytes()));
    }

    fn json(&mut self, name: &str, value: &Value) {
        let mut text = serde_json::to_string_pretty(value).expect("report serializes");
        text.push('\n');
        self.files.push((name.to_string(), text.into_bytes()));
    }
}

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Output> {
    match cmd {
        Command::Bands { samples, .. } => bands(cfg, *samples),
        Command::Spectrum { level, .. } => spectrum(cfg, *level),
        Command::Currents { level, .. } => currents(cfg, *level),
        Command::PhaseDiagram { phi_steps, k_steps, k_max, .. } => {
            let ks = grid(0.0, *k_max, *k_steps, "k-steps")?;
            if !(*k_max >= 0.0) {
                return Err(Error::Config(vec!["k-max must be ≥ 0".into()]));
            }
            let mut out = diagram(cfg, *phi_steps, &ks)?;
            out.params = json!({ "phi_steps": phi_steps, "k_steps": k_steps, "k_max": k_max });
            Ok(out)
        }
        Command::VortexDensity { phi_steps, .. } => {
            let mut out = diagram(cfg, *phi_steps, &[cfg.k_mhz])?;
            out.params = json!({ "phi_steps": phi_steps });
            Ok(out)
        }
        Command::Drive { phi0_steps, .. } => drive(cfg, *phi0_steps),
        Command::FloquetValidate { rungs, horizon_us, .. } => floquet_validate(cfg, *rungs, *horizon_us),
        Command::Generate { c1_mhz, samples, .. } => generate(cfg, *c1_mhz, *samples),
        Command::Measure { pair, leg, rung, periods, samples, noise_sigma, common } => {
            measure(cfg, *pair, *leg, *rung, *periods, *samples, *noise_sigma, common.seed)
        }
    }
}

fn grid(lo: f64, hi: f64, steps: usize, name: &str) -> Result<Vec<f64>> {
    match steps {
        0 => Err(Error::Config(vec![format!("{name} must be ≥ 1")])),
        1 => Ok(vec![lo]),
        n => Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()),
    }
}

fn solve(ladder: &LadderConfig) -> Result<EigenSystem> {
    diagonalize(&build_open_ladder(ladder)?)
}

fn level_index(level: usize, sys: &EigenSystem) -> Result<usize> {
    if level < 1 || level > sys.dim() {
        return Err(Error::Config(vec![format!("level must lie in 1..={}", sys.dim())]));
    }
    Ok(level - 1)
}

fn bands(cfg: &RunConfig, samples: usize) -> Result<Output> {
    if samples < 2 {
        return Err(Error::Config(vec!["samples must be ≥ 2".into()]));
    }
    let ladder = cfg.ladder();
    let p = BandParams::from(&ladder);
    let mut table = Table::new(&["q", "omega_minus", "omega_plus"]);
    for (q, lo, hi) in band_table(&p, samples) {
        table.push(vec![q.into(), lo.into(), hi.into()])?;
    }
    let mut out = Output { params: json!({ "samples": samples }), ..Default::default() };
    out.csv("bands.csv", &table);
    out.summary.push(format!("minima {}", minima_count(&p, samples.max(512))?));
    if let Ok(kc) = critical_coupling(ladder.g, ladder.phi) {
        out.summary.push(format!("k_c {kc}"));
    }
    Ok(out)
}

fn spectrum(cfg: &RunConfig, level: usize) -> Result<Output> {
    let ladder = cfg.ladder();
    let sys = solve(&ladder)?;
    let n = level_index(level, &sys)?;
    let mut out = Output { params: json!({ "level": level }), ..Default::default() };

    let mut spec = Table::new(&["n", "mu"]);
    for (i, mu) in sys.energies.iter().enumerate() {
        spec.push(vec![(i + 1).into(), (*mu).into()])?;
    }
    out.csv("spectrum.csv", &spec);

    let mut wf = Table::new(&["leg", "l", "re", "im", "abs"]);
    for leg in [Leg::L, Leg::R] {
        for (i, c) in sys.state(n).iter().enumerate() {
            let site = site_of_index(i);
            if site.leg == leg {
                wf.push(vec![leg.as_str().into(), site.rung.into(), c.re.into(), c.im.into(), c.norm().into()])?;
            }
        }
    }
    out.csv("wavefunction.csv", &wf);

    let mut qm = Table::new(&["leg", "q", "intensity"]);
    match fit_mode_expansion(&sys, n, &BandParams::from(&ladder)) {
        Ok(exp) => {
            for row in quasimomentum_map(&exp).rows {
                qm.push(vec![row.leg.as_str().into(), row.q.into(), row.intensity.into()])?;
            }
            out.summary.push(format!("fit_residual {:e}", exp.residual));
            if exp.reduced_basis {
                out.summary.push("reduced_basis true".into());
            }
        }
        Err(e) => out.summary.push(format!("mode fit unavailable: {e}")),
    }
    out.csv("quasimomentum.csv", &qm);
    out.summary.push(format!("mu {}", sys.energies[n]));
    Ok(out)
}

fn currents(cfg: &RunConfig, level: usize) -> Result<Output> {
    let ladder = cfg.ladder();
    let sys = solve(&ladder)?;
    let n = level_index(level, &sys)?;
    let field = link_currents(sys.state(n), &ladder)?;
    let mut table = Table::new(&["kind", "leg", "l", "value_mhz"]);
    for leg in [Leg::L, Leg::R] {
        for l in 1..ladder.n_rungs {
            table.push(vec!["leg_link".into(), leg.as_str().into(), l.into(), field.leg(leg, l).into()])?;
        }
    }
    for l in 1..=ladder.n_rungs {
        table.push(vec!["rung".into(), "LR".into(), l.into(), field.rung(l).into()])?;
    }
    let mut out = Output { params: json!({ "level": level }), ..Default::default() };
    out.csv("currents.csv", &table);
    if ladder.n_rungs >= 2 {
        out.summary.push(format!("j_chiral {}", chiral_current(&field)?));
    }
    let eps = default_vortex_eps(&field);
    if eps > 0.0 {
        out.summary.push(format!("vortices {}", count_vortices(&field, eps)?.n_v));
    }
    Ok(out)
}

fn diagram(cfg: &RunConfig, phi_steps: usize, ks: &[f64]) -> Result<Output> {
    let phis: Vec<f64> = grid(0.0, 1.0, phi_steps, "phi-steps")?.into_iter().map(|x| x * PI).collect();
    let ladder = cfg.ladder();
    let pd: PhaseDiagram = phase_diagram(&ladder, &phis, ks)?;
    let mut table = Table::new(&["phi_over_pi", "k_over_g", "j_chiral", "vortex_density", "degenerate_flag"]);
    for c in &pd.cells {
        table.push(vec![
            (c.phi / PI).into(),
            (c.k / ladder.g).into(),
            c.j_chiral.into(),
            c.vortex_density.into(),
            c.degenerate.into(),
        ])?;
    }
    let mut out = Output::default();
    out.csv("phase_diagram.csv", &table);
    out.summary.push(format!("cells {}", pd.cells.len()));
    Ok(out)
}

fn drive(cfg: &RunConfig, phi0_steps: usize) -> Result<Output> {
    let spec = cfg.drive.spec();
    let eff = renormalized_couplings(&spec, spec.g0, spec.k0)?;
    let two_level = LevelScheme::two_level(
        spec.omega_l,
        Transition::new(spec.omega1.into(), spec.omega2.into(), spec.delta1, spec.delta2),
    );
    let modulation = stark_and_modulation(&two_level)?;
    let phi0s: Vec<f64> = grid(-1.0, 1.0, phi0_steps, "phi0-steps")?.into_iter().map(|x| x * PI).collect();
    let curve = interleg_tuning_curve(&spec, 1.0, &phi0s)?;

    let mut table = Table::new(&["phi0_over_pi", "k_over_g_small_angle", "k_over_g_bessel"]);
    for p in &curve {
        table.push(vec![(p.phi0 / PI).into(), p.k_small_angle.into(), p.k_bessel.into()])?;
    }
    let report = json!({
        "delta_mhz": spec.delta(),
        "modulation_mhz": spec.modulation(),
        "stark_shift_mhz": spec.stark_shift(),
        "two_level_stark_mhz": modulation.stark[1],
        "two_level_strength_mhz": modulation.strength[1],
        "eta_x": eff.eta_x,
        "eta_y": eff.eta_y,
        "resonance_order": eff.order,
        "g_mhz": eff.g,
        "k_mhz": eff.k,
        "phi_over_pi": eff.phi / PI,
        "warnings": spec.warnings(),
    });
    let mut out = Output { params: json!({ "phi0_steps": phi0_steps }), ..Default::default() };
    out.csv("tuning.csv", &table);
    out.json("drive_report.json", &report);
    out.summary.push(format!("modulation_mhz {}", spec.modulation()));
    out.summary.push(format!("stark_shift_mhz {}", spec.stark_shift()));
    for w in spec.warnings() {
        out.summary.push(format!("warning: {w}"));
    }
    Ok(out)
}

fn floquet_validate(cfg: &RunConfig, rungs: usize, horizon_us: Option<f64>) -> Result<Output> {
    let spec = cfg.drive.spec();
    let horizon = horizon_us.unwrap_or(3.0 / spec.g0);
    let r = validate_effective_model(&spec, rungs, horizon)?;
    let report = json!({
        "max_deviation": r.max_deviation,
        "norm_drift": r.norm_drift,
        "steps": r.steps,
        "step_us": r.step_us,
        "horizon_us": horizon,
        "effective_g_mhz": r.effective.g,
        "effective_k_mhz": r.effective.k,
        "effective_phi_over_pi": r.effective.phi / PI,
        "warnings": spec.warnings(),
    });
    let mut out = Output { params: json!({ "rungs": rungs, "horizon_us": horizon }), ..Default::default() };
    out.json("validation_report.json", &report);
    out.summary.push(format!("max_deviation {}", r.max_deviation));
    Ok(out)
}

fn generate(cfg: &RunConfig, c1: f64, samples: usize) -> Result<Output> {
    if samples < 2 {
        return Err(Error::Config(vec!["samples must be ≥ 2".into()]));
    }
    let ladder = cfg.physical_ladder();
    let sys = solve(&ladder)?;
    let plan = generation_plan(&sys, c1)?;
    let overlaps = excitation_overlaps(&plan.profile, &sys)?;
    let leakage = overlaps.iter().skip(1).fold(0.0f64, |m, c| m.max(c.norm())) / c1;
    let (gamma1, dephasing1) = cfg.dissipation.spec(ladder.n_rungs).collective(sys.ground_state())?;
    let exact = fidelity_exact(plan.t_pi, c1, gamma1, dephasing1)?;
    let approx = fidelity_strong_coupling(plan.t_pi, c1, gamma1, dephasing1)?;

    let mut profile = Table::new(&["leg", "l", "re", "im", "abs"]);
    for (i, b) in plan.profile.iter().enumerate() {
        let s = site_of_index(i);
        profile.push(vec![s.leg.as_str().into(), s.rung.into(), b.re.into(), b.im.into(), b.norm().into()])?;
    }
    let mut trace = Table::new(&["t_us", "value"]);
    for i in 0..samples {
        let t = 2.0 * plan.t_pi * i as f64 / (samples - 1) as f64;
        trace.push(vec![t.into(), fidelity_exact(t, c1, gamma1, dephasing1)?.value.into()])?;
    }
    let report = json!({
        "t_pi_us": plan.t_pi,
        "fidelity_exact": exact.value,
        "fidelity_approx": approx,
        "damping_regime": exact.regime,
        "epsilon_mhz": plan.epsilon,
        "gamma1_mhz": gamma1,
        "dephasing1_mhz": dephasing1,
        "max_leakage": leakage,
    });
    let mut out = Output { params: json!({ "c1_mhz": c1, "samples": samples }), ..Default::default() };
    out.csv("drive_profile.csv", &profile);
    out.csv("trace.csv", &trace);
    out.json("generation_report.json", &report);
    out.summary.push(format!("t_pi_us {}", plan.t_pi));
    out.summary.push(format!("fidelity_exact {}", exact.value));
    out.summary.push(format!("fidelity_approx {approx}"));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn measure(
    cfg: &RunConfig,
    kind: PairKind,
    leg: LegArg,
    rung: Option<usize>,
    periods: f64,
    samples: usize,
    noise_sigma: Option<f64>,
    seed: Option<u64>,
) -> Result<Output> {
    if !(periods >= 1.0) {
        return Err(Error::Config(vec!["periods must be ≥ 1".into()]));
    }
    if let Some(s) = noise_sigma {
        if !(s >= 0.0) {
            return Err(Error::Config(vec!["noise-sigma must be ≥ 0".into()]));
        }
    }
    let ladder = cfg.physical_ladder();
    let l = rung.unwrap_or((ladder.n_rungs / 2).max(1));
    let pair = match kind {
        PairKind::Intraleg => MeasurementPair::Intraleg { leg: if leg == LegArg::L { Leg::L } else { Leg::R }, l },
        PairKind::Rung => MeasurementPair::Rung { l },
    };
    let rates = cfg.dissipation.spec(ladder.n_rungs);
    let known = FitKnowns::for_pair(pair, &ladder, &rates)?;
    let sys = solve(&ladder)?;
    let noise = noise_sigma.map(|sigma| NoiseSpec { seed: seed.unwrap_or(0), sigma });
    let trace = simulate_measurement(pair, &sys, &ladder, &rates, periods * known.period(), samples, noise)?;
    let window = periods.min(FIT_WINDOW_PERIODS);
    let fit = extract_current(&trace, &known, window)?;
    let field = link_currents(sys.ground_state(), &ladder)?;
    let exact = match pair {
        MeasurementPair::Intraleg { leg, l } => field.leg(leg, l),
        MeasurementPair::Rung { l } => field.rung(l),
    };

    let mut table = Table::new(&["t_us", "value"]);
    for (t, v) in trace.times.iter().zip(&trace.values) {
        table.push(vec![Cell::from(*t), Cell::from(*v)])?;
    }
    let report = json!({
        "j_estimate_mhz": fit.j_estimate,
        "j_exact_mhz": exact,
        "residual": fit.residual,
        "window_periods": fit.window_periods,
        "samples_used": fit.samples_used,
    });
    let mut out = Output {
        params: json!({ "pair": pair, "periods": periods, "samples": samples, "noise_sigma": noise_sigma }),
        ..Default::default()
    };
    out.csv("trace.csv", &table);
    out.json("fit_report.json", &report);
    out.summary.push(format!("j_estimate_mhz {}", fit.j_estimate));
    Ok(out)
}
