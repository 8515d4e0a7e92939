//! Python bindings: thin wrappers over the `ris_sim` core exposing the
//! geometry types, the closed-form link/interference models, the phase-exact
//! simulator entry points and the seeded Monte Carlo ensembles.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use ris_sim::config::{ExperimentConfig, Scenario};
use ris_sim::experiments::{
    desired_los_power_analytic, desired_los_power_sim, desired_ris_power_analytic,
    desired_ris_power_sim, run_interference_validation, run_moving_rx, run_power_comparison,
    run_ris_size_sweep,
};
use ris_sim::{monte_carlo, OrientationMode, Target, Vec3};
use std::str::FromStr;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn vec3(v: [f64; 3]) -> Vec3 {
    v.into()
}

/// A planar antenna array / RIS panel: element grid, spacing and local frame.
#[pyclass(name = "PlanarArray", from_py_object)]
#[derive(Clone)]
struct PyPlanarArray {
    inner: ris_sim::PlanarArray,
}

#[pymethods]
impl PyPlanarArray {
    #[new]
    fn new(
        n_x: usize,
        n_y: usize,
        spacing: f64,
        origin: [f64; 3],
        boresight: [f64; 3],
        up: [f64; 3],
    ) -> PyResult<Self> {
        Ok(PyPlanarArray {
            inner: ris_sim::PlanarArray::new(
                n_x,
                n_y,
                spacing,
                vec3(origin),
                vec3(boresight),
                vec3(up),
            )
            .map_err(err)?,
        })
    }

    /// Array at `origin` with its boresight aimed at `target`.
    #[staticmethod]
    fn facing(
        n_x: usize,
        n_y: usize,
        spacing: f64,
        origin: [f64; 3],
        target: [f64; 3],
    ) -> PyResult<Self> {
        Ok(PyPlanarArray {
            inner: ris_sim::PlanarArray::facing(n_x, n_y, spacing, vec3(origin), vec3(target))
                .map_err(err)?,
        })
    }

    #[getter]
    fn n_x(&self) -> usize {
        self.inner.n_x()
    }

    #[getter]
    fn n_y(&self) -> usize {
        self.inner.n_y()
    }

    #[getter]
    fn num_elements(&self) -> usize {
        self.inner.num_elements()
    }

    /// Far-field beamforming gain, G = N.
    #[getter]
    fn gain(&self) -> f64 {
        self.inner.gain()
    }

    #[getter]
    fn origin(&self) -> [f64; 3] {
        let o = self.inner.origin();
        [o.x, o.y, o.z]
    }

    /// Physical capture area (N_x - 1)d x (N_y - 1)d.
    #[getter]
    fn aperture_area(&self) -> f64 {
        ris_sim::aperture_area(&self.inner)
    }

    /// Near-field radius 2D²/λ for the longer array side.
    fn near_field_radius(&self, wavelength: f64) -> f64 {
        ris_sim::near_field_radius(&self.inner, wavelength)
    }

    fn __repr__(&self) -> String {
        format!(
            "PlanarArray({}x{}, spacing={:.4} m)",
            self.inner.n_x(),
            self.inner.n_y(),
            self.inner.spacing()
        )
    }
}

/// Tx, Rx and RIS arrays plus the radio parameters they share.
#[pyclass(name = "Scene", from_py_object)]
#[derive(Clone)]
struct PyScene {
    inner: ris_sim::Scene,
}

#[pymethods]
impl PyScene {
    #[new]
    #[pyo3(signature = (tx, rx, ris, frequency_hz, absorption_coeff=0.0, tx_power_w=1.0))]
    fn new(
        tx: PyPlanarArray,
        rx: PyPlanarArray,
        ris: PyPlanarArray,
        frequency_hz: f64,
        absorption_coeff: f64,
        tx_power_w: f64,
    ) -> PyResult<Self> {
        Ok(PyScene {
            inner: ris_sim::Scene::new(
                tx.inner,
                rx.inner,
                ris.inner,
                frequency_hz,
                absorption_coeff,
                tx_power_w,
            )
            .map_err(err)?,
        })
    }

    #[getter]
    fn wavelength(&self) -> f64 {
        self.inner.wavelength()
    }

    #[getter]
    fn frequency_hz(&self) -> f64 {
        self.inner.frequency()
    }

    #[getter]
    fn tx(&self) -> PyPlanarArray {
        PyPlanarArray {
            inner: self.inner.tx.clone(),
        }
    }

    #[getter]
    fn rx(&self) -> PyPlanarArray {
        PyPlanarArray {
            inner: self.inner.rx.clone(),
        }
    }

    #[getter]
    fn ris(&self) -> PyPlanarArray {
        PyPlanarArray {
            inner: self.inner.ris.clone(),
        }
    }

    /// Desired-link received power via the RIS, phase-exact simulation.
    fn desired_ris_power_sim(&self) -> PyResult<f64> {
        desired_ris_power_sim(&self.inner).map_err(err)
    }

    /// Desired-link received power via the RIS, closed form.
    fn desired_ris_power_analytic(&self) -> PyResult<f64> {
        desired_ris_power_analytic(&self.inner).map_err(err)
    }

    /// Direct LOS received power, phase-exact simulation.
    fn desired_los_power_sim(&self) -> PyResult<f64> {
        desired_los_power_sim(&self.inner).map_err(err)
    }

    /// Direct LOS received power, closed form.
    fn desired_los_power_analytic(&self) -> PyResult<f64> {
        desired_los_power_analytic(&self.inner).map_err(err)
    }
}

/// A thinned Poisson interferer population on the half-disk before the RIS.
#[pyclass(name = "StochasticPopulation", from_py_object)]
#[derive(Clone)]
struct PyPopulation {
    inner: ris_sim::StochasticPopulation,
}

#[pymethods]
impl PyPopulation {
    #[new]
    #[pyo3(signature = (user_density, transmit_prob=1.0, nonblocked_prob=1.0, r_min=0.1, r_max=10.0, oriented_at_ris=false))]
    fn new(
        user_density: f64,
        transmit_prob: f64,
        nonblocked_prob: f64,
        r_min: f64,
        r_max: f64,
        oriented_at_ris: bool,
    ) -> PyResult<Self> {
        Ok(PyPopulation {
            inner: ris_sim::StochasticPopulation::new(
                user_density,
                transmit_prob,
                nonblocked_prob,
                r_min,
                r_max,
                oriented_at_ris,
            )
            .map_err(err)?,
        })
    }

    /// Population from a mean user count over the half-disk of radius r_max.
    #[staticmethod]
    #[pyo3(signature = (mean_count, transmit_prob=1.0, nonblocked_prob=1.0, r_min=0.1, r_max=10.0, oriented_at_ris=false))]
    fn from_mean_count(
        mean_count: f64,
        transmit_prob: f64,
        nonblocked_prob: f64,
        r_min: f64,
        r_max: f64,
        oriented_at_ris: bool,
    ) -> PyResult<Self> {
        Ok(PyPopulation {
            inner: ris_sim::StochasticPopulation::from_mean_count(
                mean_count,
                transmit_prob,
                nonblocked_prob,
                r_min,
                r_max,
                oriented_at_ris,
            )
            .map_err(err)?,
        })
    }

    #[getter]
    fn user_density(&self) -> f64 {
        self.inner.user_density
    }

    #[getter]
    fn mean_count(&self) -> f64 {
        self.inner.mean_count()
    }

    /// Expected aggregate LOS interference at the Rx.
    fn mean_los_interference(&self, scene: &PyScene) -> PyResult<f64> {
        ris_sim::mean_los_interference(&self.inner, &scene.inner).map_err(err)
    }

    /// Expected aggregate interference incident on the RIS aperture.
    fn mean_ris_incident_interference(
        &self,
        a_ris: f64,
        g_tx: f64,
        scene: &PyScene,
    ) -> PyResult<f64> {
        ris_sim::mean_ris_incident_interference(&self.inner, a_ris, g_tx, &scene.inner)
            .map_err(err)
    }
}

/// Monte Carlo ensemble summary.
#[pyclass(name = "EnsembleStats")]
struct PyEnsembleStats {
    inner: monte_carlo::EnsembleStats,
}

#[pymethods]
impl PyEnsembleStats {
    #[getter]
    fn mean_power(&self) -> f64 {
        self.inner.mean_power
    }

    #[getter]
    fn std_power(&self) -> f64 {
        self.inner.std_power
    }

    #[getter]
    fn ci95_halfwidth(&self) -> f64 {
        self.inner.ci95_halfwidth
    }

    #[getter]
    fn n_realizations(&self) -> usize {
        self.inner.n_realizations
    }

    #[getter]
    fn per_realization_powers(&self) -> Vec<f64> {
        self.inner.per_realization_powers.clone()
    }

    fn converged(&self) -> bool {
        self.inner.converged()
    }

    fn __repr__(&self) -> String {
        format!(
            "EnsembleStats(mean={:.3e} W, ci95={:.3e} W, n={})",
            self.inner.mean_power, self.inner.ci95_halfwidth, self.inner.n_realizations
        )
    }
}

/// J = ∫ exp(-κ r)/r dr over [r_min, r_max].
#[pyfunction]
fn attenuation_integral(r_min: f64, r_max: f64, kappa: f64) -> PyResult<f64> {
    ris_sim::attenuation_integral(r_min, r_max, kappa).map_err(err)
}

/// Friis LOS received power with explicit antenna gains.
#[pyfunction]
fn los_link_gain(r: f64, scene: &PyScene, g_tx: f64, g_rx: f64) -> PyResult<f64> {
    ris_sim::los_link_gain(r, &scene.inner, g_tx, g_rx).map_err(err)
}

/// Two-hop RIS link received power.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn ris_link_gain(
    r1: f64,
    r2: f64,
    scene: &PyScene,
    g_tx: f64,
    g_rx: f64,
    g_ris: f64,
    a_ris: f64,
) -> PyResult<f64> {
    ris_sim::ris_link_gain(r1, r2, &scene.inner, g_tx, g_rx, g_ris, a_ris).map_err(err)
}

/// RIS-to-Rx relay hop applied to a mean incident interference power.
#[pyfunction]
fn mean_ris_relayed_interference(
    i_ris: f64,
    g_rx: f64,
    g_ris: f64,
    r_ris_rx: f64,
    scene: &PyScene,
) -> PyResult<f64> {
    ris_sim::mean_ris_relayed_interference(i_ris, g_rx, g_ris, r_ris_rx, &scene.inner)
        .map_err(err)
}

/// Seeded Monte Carlo ensemble of interferer drops through the phase-exact
/// simulator. `mode` is "toward_ris" or "random"; `target` is "rx_via_ris",
/// "rx_direct" or "ris_incident".
#[pyfunction]
#[pyo3(signature = (scene, population, interferer_n_x, interferer_n_y, mode, target, n_realizations, seed))]
#[allow(clippy::too_many_arguments)]
fn run_ensemble(
    scene: &PyScene,
    population: &PyPopulation,
    interferer_n_x: usize,
    interferer_n_y: usize,
    mode: &str,
    target: &str,
    n_realizations: usize,
    seed: u64,
) -> PyResult<PyEnsembleStats> {
    let mode = match mode {
        "toward_ris" => OrientationMode::TowardRis,
        "random" => OrientationMode::Random,
        other => return Err(err(format!("unknown orientation mode '{other}'"))),
    };
    let target = match target {
        "rx_via_ris" => Target::RxViaRis,
        "rx_direct" => Target::RxDirect,
        "ris_incident" => Target::RisIncident,
        other => return Err(err(format!("unknown target '{other}'"))),
    };
    Ok(PyEnsembleStats {
        inner: monte_carlo::run_ensemble(
            &scene.inner,
            &population.inner,
            (interferer_n_x, interferer_n_y),
            mode,
            target,
            n_realizations,
            seed,
        )
        .map_err(err)?,
    })
}

/// Run a canned experiment ("ris-size-sweep", "moving-rx",
/// "interference-validation", "power-comparison") and return
/// (csv, effective_config_toml). `config_toml` overrides the scenario
/// defaults; `seed` and `realizations` override the config.
#[pyfunction]
#[pyo3(signature = (scenario, config_toml=None, seed=None, realizations=None))]
fn run_experiment(
    scenario: &str,
    config_toml: Option<&str>,
    seed: Option<u64>,
    realizations: Option<usize>,
) -> PyResult<(String, String)> {
    let scenario = Scenario::from_str(scenario).map_err(err)?;
    let mut cfg = match config_toml {
        Some(text) => ris_sim::config::parse_config(text, scenario).map_err(err)?,
        None => ExperimentConfig::defaults(scenario),
    };
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    if let Some(n) = realizations {
        cfg.n_realizations = n;
    }
    let table = match scenario {
        Scenario::RisSizeSweep => run_ris_size_sweep(&cfg),
        Scenario::MovingRx => run_moving_rx(&cfg),
        Scenario::InterferenceValidation => run_interference_validation(&cfg),
        Scenario::PowerComparison => run_power_comparison(&cfg),
    }
    .map_err(err)?;
    Ok((table.to_csv(), cfg.effective_toml()))
}

/// 10 log10(power).
#[pyfunction]
fn to_db(power_w: f64) -> f64 {
    ris_sim::to_db(power_w)
}

#[pymodule]
fn ris_sim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPlanarArray>()?;
    m.add_class::<PyScene>()?;
    m.add_class::<PyPopulation>()?;
    m.add_class::<PyEnsembleStats>()?;
    m.add_function(wrap_pyfunction!(attenuation_integral, m)?)?;
    m.add_function(wrap_pyfunction!(los_link_gain, m)?)?;
    m.add_function(wrap_pyfunction!(ris_link_gain, m)?)?;
    m.add_function(wrap_pyfunction!(mean_ris_relayed_interference, m)?)?;
    m.add_function(wrap_pyfunction!(run_ensemble, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(to_db, m)?)?;
    m.add("SPEED_OF_LIGHT", ris_sim::SPEED_OF_LIGHT)?;
    Ok(())
}
