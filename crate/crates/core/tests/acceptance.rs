//! Runs the ten acceptance criteria and prints one PASS/FAIL line for each.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::Instant;

use fluxladder::bands::{band_energy, characteristic_roots, critical_coupling, minima_count, BandParams, Branch};
use fluxladder::currents::{chiral_current, count_vortices, default_vortex_eps, link_currents, phase_diagram};
use fluxladder::dynamics::{
    extract_current, fidelity_exact, fidelity_strong_coupling, generation_plan, lindblad_two_level_numeric,
    rabi_population_difference, simulate_measurement, DissipationSpec, FitKnowns, MeasurementPair, NoiseSpec,
    FIT_WINDOW_PERIODS,
};
use fluxladder::eigensolve::{diagonalize, fit_mode_expansion};
use fluxladder::floquet::{
    interleg_tuning_curve, stark_and_modulation, validate_effective_model, DriveSpec, LevelScheme,
};
use fluxladder::model::build_open_ladder;
use fluxladder::{LadderConfig, Leg};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn ground(cfg: &LadderConfig) -> fluxladder::eigensolve::EigenSystem {
    diagonalize(&build_open_ladder(cfg).unwrap()).unwrap()
}

#[allow(clippy::approx_constant)]
fn criterion_1() -> Outcome {
    let kc = critical_coupling(1.0, FRAC_PI_2).unwrap();
    let exact = (kc - 2f64.sqrt()).abs() <= 2.0 * f64::EPSILON * 2f64.sqrt();
    let count = |k: f64| minima_count(&BandParams::new(1.0, k, FRAC_PI_2), 4096).unwrap();
    let (mut lo, mut hi) = (0.5, 2.5);
    let ends_ok = count(lo) == 2 && count(hi) == 1;
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if count(mid) >= 2 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let k_bis = 0.5 * (lo + hi);
    let pass = exact && ends_ok && (k_bis - 1.4142).abs() <= 1e-3;
    outcome(pass, format!("K_c = {kc:.15}, bisection transition at K = {k_bis:.6}"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = BandParams::new(1.0, rng.random_range(0.0..5.0), rng.random_range(-PI..PI));
        let gap = band_energy(0.0, Branch::Plus, &p) - band_energy(0.0, Branch::Minus, &p);
        worst = worst.max((gap - 2.0 * p.k).abs());
    }
    let counts: Vec<usize> = [0.2, 2f64.sqrt(), 2.5]
        .iter()
        .map(|&k| minima_count(&BandParams::new(1.0, k, FRAC_PI_2), 4096).unwrap())
        .collect();
    let pass = worst < 1e-12 && counts == [2, 1, 1];
    outcome(pass, format!("max |Δω(0) − 2K| = {worst:.2e}, minima counts {counts:?}"))
}

fn criterion_3() -> Outcome {
    let cfg = LadderConfig::dimensionless(20, 0.5, FRAC_PI_2);
    let oracle = common::ladder_spectrum(20, 1.0, 0.5, FRAC_PI_2);
    let sys = ground(&cfg);
    let mu = &sys.energies;
    let oracle_gap = mu.iter().zip(&oracle).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let sym = (0..mu.len()).fold(0.0f64, |m, i| m.max((mu[i] + mu[mu.len() - 1 - i]).abs()));
    let pairs = (mu[1] - mu[0]) < 0.05 * (mu[2] - mu[1]);
    let pass =
        (oracle[0] + 2.10).abs() <= 0.01 && (mu[0] + 2.10).abs() <= 0.01 && oracle_gap < 1e-10 && sym < 1e-10 && pairs;
    outcome(
        pass,
        format!(
            "μ₁ = {:.6} (oracle {:.6}), ±-symmetry {sym:.1e}, μ₂−μ₁ = {:.2e}, μ₃−μ₂ = {:.3}",
            mu[0],
            oracle[0],
            mu[1] - mu[0],
            mu[2] - mu[1]
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    let mut real_roots = true;
    for k in [0.5, 2.5] {
        let cfg = LadderConfig::dimensionless(20, k, FRAC_PI_2);
        let sys = ground(&cfg);
        let p = BandParams::from(&cfg);
        for level in 0..2 {
            match fit_mode_expansion(&sys, level, &p) {
                Ok(e) => worst = worst.max(e.residual),
                Err(_) => worst = f64::INFINITY,
            }
            if k == 2.5 {
                let r = characteristic_roots(sys.energies[level], &p).unwrap();
                real_roots &= r.roots[2].im == 0.0 && r.roots[3].im == 0.0;
            }
        }
    }
    outcome(worst < 1e-6 && real_roots, format!("max residual {worst:.2e}, z₃ z₄ real at K = 2.5: {real_roots}"))
}

fn criterion_5() -> Outcome {
    let cfg = LadderConfig::physical(20, 3.5, 1.75, FRAC_PI_2);
    let sys = ground(&cfg);
    let field = link_currents(sys.ground_state(), &cfg).unwrap();
    let jl = field.leg(Leg::L, 10);
    let jr = field.rung(10);
    let stationarity = field.net_inflow().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let pass =
        ((jl - 0.43) / 0.43).abs() <= 0.01 && ((jr + 0.5785) / 0.5785).abs() <= 0.01 && stationarity < 1e-10 * cfg.g;
    outcome(pass, format!("j_L(10,11) = {jl:.5}, j_LR(10) = {jr:.5}, max net inflow {stationarity:.1e}"))
}

fn criterion_6() -> Outcome {
    let mut antisym = 0.0f64;
    for phi in [0.3, 0.9, FRAC_PI_2, 2.2] {
        for k in [0.4, 1.2, 2.5] {
            let jc = |p: f64| {
                let cfg = LadderConfig::dimensionless(20, k, p);
                chiral_current(&link_currents(ground(&cfg).ground_state(), &cfg).unwrap()).unwrap()
            };
            antisym = antisym.max((jc(phi) + jc(-phi)).abs());
        }
    }
    let jc_at = |k: f64| {
        let cfg = LadderConfig::dimensionless(20, k, FRAC_PI_2);
        chiral_current(&link_currents(ground(&cfg).ground_state(), &cfg).unwrap()).unwrap()
    };
    let (j20, j25) = (jc_at(2.0), jc_at(2.5));
    let saturation = (j20 - j25).abs() / j25.abs();

    let start = Instant::now();
    let phi_grid: Vec<f64> = (0..64).map(|i| PI * i as f64 / 63.0).collect();
    let k_grid: Vec<f64> = (0..64).map(|i| 3.0 * i as f64 / 63.0).collect();
    let diagram = phase_diagram(&LadderConfig::dimensionless(20, 0.0, 0.0), &phi_grid, &k_grid).unwrap();
    let sweep = start.elapsed().as_secs_f64();

    let meissner = [2.0, 2.5, 3.0].map(|k| {
        let cfg = LadderConfig::dimensionless(20, k, FRAC_PI_2);
        let field = link_currents(ground(&cfg).ground_state(), &cfg).unwrap();
        count_vortices(&field, default_vortex_eps(&field)).unwrap().d_v
    });
    let plateau = meissner.iter().all(|&d| (d - 0.05).abs() < 1e-12);
    let pass = antisym < 1e-10 && saturation < 0.02 && plateau && sweep < 60.0 && diagram.cells.len() == 4096;
    outcome(
        pass,
        format!(
            "max |j_C(φ)+j_C(−φ)| = {antisym:.1e}, |j_C(2.0)−j_C(2.5)|/j_C(2.5) = {saturation:.4}, D_V(K>K_c) = {meissner:?}, 64×64 sweep {sweep:.1} s"
        ),
    )
}

fn criterion_7() -> Outcome {
    let spec = DriveSpec::reference(FRAC_PI_2, FRAC_PI_2);
    let (ws, omega) = (spec.stark_shift(), spec.modulation());
    let harmonic = stark_and_modulation(&LevelScheme::harmonic(5, 5000.0, [178.0, 178.0], [1000.0, 1100.0])).unwrap();
    let vanishes = harmonic.stark.iter().chain(&harmonic.strength).all(|&v| v.abs() < 1e-12);
    let grid: Vec<f64> = (1..=16).map(|i| 0.1 * i as f64 / 16.0).collect();
    let curve = interleg_tuning_curve(&spec, 1.0, &grid).unwrap();
    let worst = curve.iter().fold(0.0f64, |m, p| m.max((p.k_small_angle / (3.0 * p.phi0.sin()) - 1.0).abs()));
    let pass = (ws - 30.24).abs() < 0.005 && (omega - 31.68).abs() <= 0.05 && vanishes && worst < 0.01;
    outcome(
        pass,
        format!("ω_s = {ws:.4} MHz, Ω = {omega:.4} MHz, harmonic modulation zero: {vanishes}, max |K/(3g sin φ₀) − 1| = {worst:.4}"),
    )
}

fn criterion_8() -> Outcome {
    let base = DriveSpec::reference(FRAC_PI_4, FRAC_PI_2);
    let horizon = 3.0 / base.g0;
    let mut devs = Vec::new();
    let mut drift = 0.0f64;
    for m in [1.0, 2.0, 4.0] {
        let spec = DriveSpec {
            omega1: base.omega1 * f64::sqrt(m),
            omega2: base.omega2 * f64::sqrt(m),
            delta2: base.delta1 + base.delta() * m,
            omega_r: base.omega_l + base.delta() * m,
            ..base
        };
        match validate_effective_model(&spec, 2, horizon) {
            Ok(r) => {
                devs.push(r.max_deviation);
                drift = drift.max(r.norm_drift);
            }
            Err(e) => return outcome(false, format!("validation failed at δ×{m}: {e}")),
        }
    }
    let monotone = devs.windows(2).all(|w| w[1] < w[0]);
    let pass = devs[0] < 0.05 && monotone;
    outcome(pass, format!("max deviation at δ, 2δ, 4δ = {devs:.4?}, norm drift {drift:.1e}"))
}

fn criterion_9() -> Outcome {
    let cfg = LadderConfig::physical(20, 3.5, 1.75, FRAC_PI_2);
    let plan = generation_plan(&ground(&cfg), 1.0).unwrap();
    let t = plan.t_pi;
    let approx = fidelity_strong_coupling(t, 1.0, 0.05, 0.1).unwrap();
    let exact = fidelity_exact(t, 1.0, 0.05, 0.1).unwrap().value;
    let mut worst = 0.0f64;
    for dephasing in [10.0, 1.0, 0.1] {
        let trace = lindblad_two_level_numeric(1.0, 0.05, dephasing, 2.0, 2e-4).unwrap();
        for (&time, &v) in trace.times.iter().zip(&trace.values) {
            worst = worst.max((v - fidelity_exact(time, 1.0, 0.05, dephasing).unwrap().value).abs());
        }
    }
    let pass = (t - 0.5).abs() < 1e-12
        && (approx - 0.9273).abs() <= 1e-4
        && ((exact - approx) / approx).abs() <= 0.005
        && worst < 1e-6;
    outcome(
        pass,
        format!("t_π = {t} μs, strong-coupling F = {approx:.6}, exact F = {exact:.6}, numeric vs exact {worst:.1e}"),
    )
}

fn criterion_10() -> Outcome {
    let cfg = LadderConfig::physical(20, 3.5, 1.75, FRAC_PI_2);
    let sys = ground(&cfg);
    let rates = DissipationSpec::homogeneous(20, 0.05, 0.1);
    let field = link_currents(sys.ground_state(), &cfg).unwrap();
    let mut oracle_dev = 0.0f64;
    let mut clean_err = 0.0f64;
    let mut noisy_err = 0.0f64;
    for (pair, j_true) in [
        (MeasurementPair::Intraleg { leg: Leg::L, l: 10 }, field.leg(Leg::L, 10)),
        (MeasurementPair::Rung { l: 10 }, field.rung(10)),
    ] {
        let known = FitKnowns::for_pair(pair, &cfg, &rates).unwrap();
        let horizon = FIT_WINDOW_PERIODS * known.period();
        let clean = simulate_measurement(pair, &sys, &cfg, &rates, horizon, 2001, None).unwrap();
        for (&t, &v) in clean.times.iter().zip(&clean.values) {
            let analytic = rabi_population_difference(t, pair, &sys, &cfg, &rates).unwrap();
            oracle_dev = oracle_dev.max((v - analytic).abs());
        }
        let fit = extract_current(&clean, &known, FIT_WINDOW_PERIODS).unwrap();
        clean_err = clean_err.max(((fit.j_estimate - j_true) / j_true).abs());
        for seed in 0..100 {
            let noise = NoiseSpec { seed, sigma: 0.01 };
            let trace = simulate_measurement(pair, &sys, &cfg, &rates, horizon, 20001, Some(noise)).unwrap();
            let fit = extract_current(&trace, &known, FIT_WINDOW_PERIODS).unwrap();
            noisy_err = noisy_err.max(((fit.j_estimate - j_true) / j_true).abs());
        }
    }
    let pass = oracle_dev < 0.02 && clean_err < 0.005 && noisy_err < 0.02;
    outcome(
        pass,
        format!(
            "oracle vs analytic {oracle_dev:.1e}, noiseless error {:.4}%, worst noisy error {:.3}%",
            100.0 * clean_err,
            100.0 * noisy_err
        ),
    )
}

fn main() {
    type Criterion = (u32, f64, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        (1, 1.0, criterion_1),
        (2, 1.0, criterion_2),
        (3, 1.0, criterion_3),
        (4, 1.0, criterion_4),
        (5, 1.0, criterion_5),
        (6, 60.0, criterion_6),
        (7, 1.0, criterion_7),
        (8, 120.0, criterion_8),
        (9, 10.0, criterion_9),
        (10, 30.0, criterion_10),
    ];
    let mut failed = Vec::new();
    for (n, budget, run) in criteria {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n}: {verdict} ({secs:.2} s, budget {budget} s) {}", o.detail);
        if !o.pass {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
