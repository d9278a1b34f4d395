//! Python bindings.

use ladder::bands::{self, BandParams, Branch};
use ladder::currents;
use ladder::dynamics::{self, DissipationSpec, FitKnowns, MeasurementPair, NoiseSpec};
use ladder::eigensolve::{self, EigenSystem};
use ladder::floquet::{self, DriveSpec};
use ladder::model::build_open_ladder;
use ladder::{Error, LadderConfig, Leg, Units};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    if e.is_config() || matches!(e, Error::Dimension { .. } | Error::OutsideBand(_)) {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn parse_units(units: &str) -> PyResult<Units> {
    match units {
        "dimensionless" => Ok(Units::Dimensionless),
        "physical_mhz" | "physical-mhz" => Ok(Units::PhysicalMhz),
        other => Err(PyValueError::new_err(format!("unknown units {other:?}"))),
    }
}

fn parse_leg(leg: &str) -> PyResult<Leg> {
    match leg {
        "L" | "l" => Ok(Leg::L),
        "R" | "r" => Ok(Leg::R),
        other => Err(PyValueError::new_err(format!("unknown leg {other:?}"))),
    }
}

/// Open two-leg ladder threaded by a uniform flux.
#[pyclass(name = "Ladder", module = "fluxladder", frozen)]
struct PyLadder {
    cfg: LadderConfig,
    sys: EigenSystem,
}

#[pymethods]
impl PyLadder {
    #[new]
    #[pyo3(signature = (n_rungs, k, phi, g = 1.0, units = "dimensionless"))]
    fn new(n_rungs: usize, k: f64, phi: f64, g: f64, units: &str) -> PyResult<Self> {
        let cfg = LadderConfig::new(n_rungs, g, k, phi, parse_units(units)?);
        let sys = eigensolve::diagonalize(&build_open_ladder(&cfg).map_err(to_py)?).map_err(to_py)?;
        Ok(Self { cfg, sys })
    }

    #[getter]
    fn n_rungs(&self) -> usize {
        self.cfg.n_rungs
    }

    #[getter]
    fn g(&self) -> f64 {
        self.cfg.g
    }

    #[getter]
    fn k(&self) -> f64 {
        self.cfg.k
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.cfg.phi
    }

    /// Row-major Hamiltonian as nested lists of complex numbers.
    fn hamiltonian(&self) -> PyResult<Vec<Vec<num_complex::Complex64>>> {
        let h = build_open_ladder(&self.cfg).map_err(to_py)?;
        Ok(h.entries().chunks(h.dim()).map(<[_]>::to_vec).collect())
    }

    /// Ascending single-excitation energies.
    fn energies(&self) -> Vec<f64> {
        self.sys.energies.clone()
    }

    /// Eigenvector of `level` (0 is the ground state) in site-index order.
    fn state(&self, level: usize) -> PyResult<Vec<num_complex::Complex64>> {
        if level >= self.sys.dim() {
            return Err(PyValueError::new_err(format!("level {level} out of range")));
        }
        Ok(self.sys.state(level).to_vec())
    }

    /// Link currents of one eigenstate: `leg_l`, `leg_r`, `rungs`, `chiral`.
    #[pyo3(signature = (level = 0))]
    fn currents<'py>(&self, py: Python<'py>, level: usize) -> PyResult<Bound<'py, PyDict>> {
        let f = currents::link_currents(&self.state(level)?, &self.cfg).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("leg_l", f.leg_links[0].clone())?;
        d.set_item("leg_r", f.leg_links[1].clone())?;
        d.set_item("rungs", f.rungs.clone())?;
        d.set_item("chiral", currents::chiral_current(&f).ok())?;
        Ok(d)
    }

    /// Ground-state vortex count and density `(n_v, d_v)`.
    fn vortices(&self) -> PyResult<(usize, f64)> {
        let f = currents::link_currents(self.sys.ground_state(), &self.cfg).map_err(to_py)?;
        let c = currents::count_vortices(&f, currents::default_vortex_eps(&f)).map_err(to_py)?;
        Ok((c.n_v, c.d_v))
    }

    /// Mode-expansion fit of one eigenstate: residual, roots and quasimomenta.
    #[pyo3(signature = (level = 0))]
    fn mode_expansion<'py>(&self, py: Python<'py>, level: usize) -> PyResult<Bound<'py, PyDict>> {
        let e = eigensolve::fit_mode_expansion(&self.sys, level, &BandParams::from(&self.cfg)).map_err(to_py)?;
        let map = eigensolve::quasimomentum_map(&e);
        let d = PyDict::new(py);
        d.set_item("residual", e.residual)?;
        d.set_item("roots", e.roots.roots.to_vec())?;
        d.set_item("coefficients", e.coefficients.clone())?;
        d.set_item("quasimomenta", map.rows.iter().map(|r| (r.leg.as_str(), r.q, r.intensity)).collect::<Vec<_>>())?;
        Ok(d)
    }

    /// Simulated two-site current measurement on the ground state. Couplings
    /// are read as MHz.
    #[pyo3(signature = (pair, rung, leg = "L", gamma_mhz = 0.05, dephasing_mhz = 0.1, periods = 3.0, samples = 2001, noise_sigma = None, seed = 0))]
    #[allow(clippy::too_many_arguments)]
    fn measure<'py>(
        &self,
        py: Python<'py>,
        pair: &str,
        rung: usize,
        leg: &str,
        gamma_mhz: f64,
        dephasing_mhz: f64,
        periods: f64,
        samples: usize,
        noise_sigma: Option<f64>,
        seed: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let pair = match pair {
            "intraleg" => MeasurementPair::Intraleg { leg: parse_leg(leg)?, l: rung },
            "rung" => MeasurementPair::Rung { l: rung },
            other => return Err(PyValueError::new_err(format!("unknown pair {other:?}"))),
        };
        let cfg = LadderConfig { units: Units::PhysicalMhz, ..self.cfg };
        let rates = DissipationSpec::homogeneous(cfg.n_rungs, gamma_mhz, dephasing_mhz);
        let known = FitKnowns::for_pair(pair, &cfg, &rates).map_err(to_py)?;
        let noise = noise_sigma.map(|sigma| NoiseSpec { seed, sigma });
        let trace =
            dynamics::simulate_measurement(pair, &self.sys, &cfg, &rates, periods * known.period(), samples, noise)
                .map_err(to_py)?;
        let fit =
            dynamics::extract_current(&trace, &known, periods.min(dynamics::FIT_WINDOW_PERIODS)).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("times", trace.times)?;
        d.set_item("values", trace.values)?;
        d.set_item("j_estimate", fit.j_estimate)?;
        d.set_item("residual", fit.residual)?;
        Ok(d)
    }

    /// π-pulse plan for ground-state generation with Rabi frequency `c1` (MHz).
    fn generation_plan<'py>(&self, py: Python<'py>, c1: f64) -> PyResult<Bound<'py, PyDict>> {
        let plan = dynamics::generation_plan(&self.sys, c1).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("profile", plan.profile)?;
        d.set_item("epsilon", plan.epsilon)?;
        d.set_item("t_pi", plan.t_pi)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Ladder(n_rungs={}, g={}, k={}, phi={})", self.cfg.n_rungs, self.cfg.g, self.cfg.k, self.cfg.phi)
    }
}

/// Two-tone drive of every qubit together with the bare couplings.
#[pyclass(name = "Drive", module = "fluxladder", frozen)]
struct PyDrive {
    spec: DriveSpec,
}

#[pymethods]
impl PyDrive {
    #[new]
    #[pyo3(signature = (phi0, phi, omega1 = 178.0, omega2 = 178.0, delta1 = 1000.0, delta2 = 1100.0, omega_l = 2000.0, omega_r = 2100.0, g0 = 3.5, k0 = 33.0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        phi0: f64,
        phi: f64,
        omega1: f64,
        omega2: f64,
        delta1: f64,
        delta2: f64,
        omega_l: f64,
        omega_r: f64,
        g0: f64,
        k0: f64,
    ) -> PyResult<Self> {
        let spec = DriveSpec { omega1, omega2, delta1, delta2, phi0, phi, omega_l, omega_r, g0, k0 };
        spec.validate().map_err(to_py)?;
        Ok(Self { spec })
    }

    fn stark_shift(&self) -> f64 {
        self.spec.stark_shift()
    }

    fn modulation(&self) -> f64 {
        self.spec.modulation()
    }

    fn warnings(&self) -> Vec<String> {
        self.spec.warnings()
    }

    /// Renormalized `(g, K, φ)` of the effective static ladder.
    fn effective_couplings(&self) -> PyResult<(f64, f64, f64)> {
        let c = floquet::renormalized_couplings(&self.spec, self.spec.g0, self.spec.k0).map_err(to_py)?;
        Ok((c.g, c.k, c.phi))
    }

    /// `(φ₀, K small-angle, K Bessel)` rows in units of `g`.
    #[pyo3(signature = (phi0_grid, g = 1.0))]
    fn tuning_curve(&self, phi0_grid: Vec<f64>, g: f64) -> PyResult<Vec<(f64, f64, f64)>> {
        let curve = floquet::interleg_tuning_curve(&self.spec, g, &phi0_grid).map_err(to_py)?;
        Ok(curve.iter().map(|p| (p.phi0, p.k_small_angle, p.k_bessel)).collect())
    }

    /// Worst population mismatch between the modulated ladder and its
    /// effective model, with the norm drift of the integration.
    #[pyo3(signature = (n_rungs = 2, horizon_us = None))]
    fn validate_effective_model(&self, n_rungs: usize, horizon_us: Option<f64>) -> PyResult<(f64, f64)> {
        let horizon = horizon_us.unwrap_or(3.0 / self.spec.g0);
        let r = floquet::validate_effective_model(&self.spec, n_rungs, horizon).map_err(to_py)?;
        Ok((r.max_deviation, r.norm_drift))
    }
}

#[pyfunction]
#[pyo3(signature = (q, g, k, phi, upper = false))]
fn band_energy(q: f64, g: f64, k: f64, phi: f64, upper: bool) -> f64 {
    let branch = if upper { Branch::Plus } else { Branch::Minus };
    bands::band_energy(q, branch, &BandParams::new(g, k, phi))
}

#[pyfunction]
#[pyo3(signature = (g, k, phi, grid_size = 4096))]
fn minima_count(g: f64, k: f64, phi: f64, grid_size: usize) -> PyResult<usize> {
    bands::minima_count(&BandParams::new(g, k, phi), grid_size).map_err(to_py)
}

#[pyfunction]
fn critical_coupling(g: f64, phi: f64) -> PyResult<f64> {
    bands::critical_coupling(g, phi).map_err(to_py)
}

#[pyfunction]
fn decay_bound_lambda(g: f64, k: f64, phi: f64) -> PyResult<f64> {
    bands::decay_bound_lambda(&BandParams::new(g, k, phi)).map_err(to_py)
}

/// Ground-state `(φ, K, j_C, D_V)` over a grid, φ-major.
#[pyfunction]
fn phase_diagram(
    py: Python<'_>,
    n_rungs: usize,
    phi_grid: Vec<f64>,
    k_grid: Vec<f64>,
) -> PyResult<Vec<(f64, f64, f64, f64)>> {
    let template = LadderConfig::dimensionless(n_rungs, 0.0, 0.0);
    let d = py.detach(|| currents::phase_diagram(&template, &phi_grid, &k_grid)).map_err(to_py)?;
    Ok(d.cells.iter().map(|c| (c.phi, c.k, c.j_chiral, c.vortex_density)).collect())
}

#[pyfunction]
fn fidelity_exact(t: f64, c1: f64, gamma1: f64, dephasing1: f64) -> PyResult<f64> {
    dynamics::fidelity_exact(t, c1, gamma1, dephasing1).map(|f| f.value).map_err(to_py)
}

#[pyfunction]
fn fidelity_strong_coupling(t: f64, c1: f64, gamma1: f64, dephasing1: f64) -> PyResult<f64> {
    dynamics::fidelity_strong_coupling(t, c1, gamma1, dephasing1).map_err(to_py)
}

#[pyfunction]
fn bessel_j(n: i32, x: f64) -> f64 {
    floquet::bessel::bessel_j(n, x)
}

#[pymodule]
fn fluxladder(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLadder>()?;
    m.add_class::<PyDrive>()?;
    m.add_function(wrap_pyfunction!(band_energy, m)?)?;
    m.add_function(wrap_pyfunction!(minima_count, m)?)?;
    m.add_function(wrap_pyfunction!(critical_coupling, m)?)?;
    m.add_function(wrap_pyfunction!(decay_bound_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(phase_diagram, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity_exact, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity_strong_coupling, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_j, m)?)?;
    Ok(())
}
