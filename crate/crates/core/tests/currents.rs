use std::f64::consts::{FRAC_PI_2, PI};

use fluxladder::bands::critical_coupling;
use fluxladder::currents::{
    chiral_current, count_vortices, default_vortex_eps, link_currents, locate_kink, phase_diagram,
};
use fluxladder::eigensolve::diagonalize;
use fluxladder::model::build_open_ladder;
use fluxladder::LadderConfig;
use proptest::prelude::*;

fn chiral(cfg: &LadderConfig) -> f64 {
    let sys = diagonalize(&build_open_ladder(cfg).unwrap()).unwrap();
    chiral_current(&link_currents(sys.ground_state(), cfg).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn every_eigenstate_is_stationary(n in 2usize..16, k in 0.0f64..3.0, phi in -PI..PI) {
        let cfg = LadderConfig::dimensionless(n, k, phi);
        let sys = diagonalize(&build_open_ladder(&cfg).unwrap()).unwrap();
        for level in 0..sys.dim() {
            let field = link_currents(sys.state(level), &cfg).unwrap();
            for v in field.net_inflow() {
                prop_assert!(v.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn chiral_current_is_odd_in_flux(n in 2usize..16, k in 0.0f64..3.0, phi in 0.05f64..3.0) {
        let cfg = LadderConfig::dimensionless(n, k, phi);
        let gap = diagonalize(&build_open_ladder(&cfg).unwrap()).unwrap().ground_gap();
        prop_assume!(gap > 1e-6);
        prop_assert!((chiral(&cfg) + chiral(&cfg.with_phi(-phi))).abs() < 1e-10);
    }
}

#[test]
fn kink_sits_at_critical_coupling() {
    let k_grid: Vec<f64> = (0..64).map(|i| 3.0 * i as f64 / 63.0).collect();
    let step = k_grid[1] - k_grid[0];
    for frac in [0.2, 0.3, 0.4, 0.5, 0.6] {
        let phi = frac * PI;
        let kc = critical_coupling(1.0, phi).unwrap();
        let samples: Vec<(f64, f64)> =
            k_grid.iter().map(|&k| (k, chiral(&LadderConfig::dimensionless(20, k, phi)))).collect();
        let kink = locate_kink(&samples).unwrap();
        assert!((kink - kc).abs() <= step, "φ = {frac}π: kink {kink}, K_c {kc}");
    }
}

#[test]
fn vortex_density_falls_as_coupling_grows() {
    let k_grid: Vec<f64> = (1..40).map(|i| 0.075 * i as f64).collect();
    let diagram = phase_diagram(&LadderConfig::dimensionless(20, 0.0, 0.0), &[FRAC_PI_2], &k_grid).unwrap();
    let dv: Vec<f64> = (0..k_grid.len()).map(|i| diagram.cell(0, i).vortex_density).collect();
    for w in dv.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "{dv:?}");
    }
    assert_eq!(*dv.last().unwrap(), 0.05);
    assert!(dv[0] > 0.05);
}

#[test]
fn meissner_state_is_one_boundary_circulation() {
    let cfg = LadderConfig::dimensionless(20, 2.5, FRAC_PI_2);
    let sys = diagonalize(&build_open_ladder(&cfg).unwrap()).unwrap();
    let field = link_currents(sys.ground_state(), &cfg).unwrap();
    for l in 1..=20 {
        assert!((field.rung(l) + field.rung(21 - l)).abs() < 1e-10);
    }
    let count = count_vortices(&field, default_vortex_eps(&field)).unwrap();
    assert_eq!(count.n_v, 1);
}
