//! Python bindings for the three-well Bose-Hubbard mode-splitter toolkit.
//!
//! Exposes the run configuration plus the four computation routes. Series
//! results come back as plain dicts of lists keyed by the CSV column names
//! (`t`, `N1`, ..., `gamma12`, with `<col>_se` companions for stochastic
//! runs), so they drop straight into numpy or pandas:
//!
//!     import triwell_py as tw
//!     cfg = tw.SystemConfig(j=1.0, chi=0.0, n_atoms=200, initial_state="fock")
//!     series = tw.analytic_series(cfg)
//!     peak = max(series["xi13"])

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use triwell::beamsplitter::{self, BsConfig, BsInput};
use triwell::criteria::{self, CriteriaReport, COLUMN_NAMES};
use triwell::model::{initial_moments, InitialState, SystemConfig as CoreConfig};
use triwell::moments::MomentVector;
use triwell::oracle::{bs_exact, ThreeWellOracle};
use triwell::ppsim::{output_grid, run_ensemble};

fn value_error(err: triwell::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// Physical and numerical parameters of one run.
#[pyclass(name = "SystemConfig", skip_from_py_object)]
#[derive(Clone)]
struct PySystemConfig {
    inner: CoreConfig,
}

#[pymethods]
impl PySystemConfig {
    #[new]
    #[pyo3(signature = (j, chi, n_atoms, initial_state,
                        t_max=10.0, dt=1e-3, grid_dt=1e-2, n_traj=100_000, seed=1))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        j: f64,
        chi: f64,
        n_atoms: f64,
        initial_state: &str,
        t_max: f64,
        dt: f64,
        grid_dt: f64,
        n_traj: u64,
        seed: u64,
    ) -> PyResult<Self> {
        let state = match initial_state {
            "fock" => InitialState::Fock,
            "coherent" => InitialState::Coherent,
            other => {
                return Err(PyValueError::new_err(format!(
                    "initial_state must be 'fock' or 'coherent', got '{other}'"
                )))
            }
        };
        let mut inner = CoreConfig::new(j, chi, n_atoms, state);
        inner.t_max = t_max;
        inner.dt = dt;
        inner.grid_dt = grid_dt;
        inner.n_traj = n_traj;
        inner.seed = seed;
        inner.validate().map_err(value_error)?;
        Ok(PySystemConfig { inner })
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.inner.omega().value()
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!(
            "SystemConfig(j={}, chi={}, n_atoms={}, initial_state='{}', t_max={}, dt={}, \
             grid_dt={}, n_traj={}, seed={})",
            c.j, c.chi, c.n_atoms, c.initial_state, c.t_max, c.dt, c.grid_dt, c.n_traj, c.seed
        )
    }
}

fn parse_bs_input(input: &str, n: Option<f64>, r: Option<f64>) -> PyResult<BsInput> {
    match input {
        "fock" => {
            let n = n.ok_or_else(|| PyValueError::new_err("fock input needs n"))?;
            if n < 0.0 || n.fract() != 0.0 {
                return Err(PyValueError::new_err(
                    "fock n must be a non-negative integer",
                ));
            }
            Ok(BsInput::Fock(n as u32))
        }
        "coherent" => {
            Ok(BsInput::Coherent(n.ok_or_else(|| {
                PyValueError::new_err("coherent input needs n")
            })?))
        }
        "squeezed" => {
            Ok(BsInput::Squeezed(r.ok_or_else(|| {
                PyValueError::new_err("squeezed input needs r")
            })?))
        }
        other => Err(PyValueError::new_err(format!(
            "input must be 'fock', 'coherent' or 'squeezed', got '{other}'"
        ))),
    }
}

fn report_to_dict<'py>(
    py: Python<'py>,
    report: &CriteriaReport,
    with_se: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item("t", &report.times)?;
    for (c, name) in COLUMN_NAMES.iter().enumerate() {
        let values: Vec<f64> = report.points.iter().map(|p| p.column(c).value).collect();
        dict.set_item(name, values)?;
        if with_se {
            let ses: Vec<f64> = report.points.iter().map(|p| p.column(c).se).collect();
            dict.set_item(format!("{name}_se"), ses)?;
        }
    }
    dict.set_item("n_used", report.n_used)?;
    dict.set_item("n_diverged", report.n_diverged)?;
    Ok(dict)
}

/// Closed-form non-interacting witness series on the run's grid.
#[pyfunction]
fn analytic_series<'py>(py: Python<'py>, config: &PySystemConfig) -> PyResult<Bound<'py, PyDict>> {
    let cfg = &config.inner;
    cfg.validate().map_err(value_error)?;
    let analytic = triwell::analytic::Analytic::new(cfg);
    let times = output_grid(cfg).map_err(value_error)?.times;
    let dict = PyDict::new(py);
    dict.set_item("t", &times)?;
    let points: Vec<[f64; 23]> = times
        .iter()
        .map(|&t| analytic.point(t).map(|p| p.as_array()))
        .collect::<triwell::Result<_>>()
        .map_err(value_error)?;
    for (c, name) in COLUMN_NAMES.iter().enumerate() {
        let values: Vec<f64> = points.iter().map(|p| p[c]).collect();
        dict.set_item(name, values)?;
    }
    Ok(dict)
}

/// Positive-P ensemble witness series with `<col>_se` standard errors.
/// Releases the GIL while the ensemble integrates.
#[pyfunction]
fn stochastic_series<'py>(
    py: Python<'py>,
    config: &PySystemConfig,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = config.inner.clone();
    let report = py
        .detach(move || {
            let series = run_ensemble(&cfg)?;
            criteria::report(&series)
        })
        .map_err(value_error)?;
    report_to_dict(py, &report, true)
}

/// Exact fixed-N witness series (Fock input).
#[pyfunction]
fn oracle_series<'py>(py: Python<'py>, config: &PySystemConfig) -> PyResult<Bound<'py, PyDict>> {
    let cfg = &config.inner;
    cfg.validate().map_err(value_error)?;
    if cfg.initial_state != InitialState::Fock {
        return Err(PyValueError::new_err(
            "the exact oracle supports only 'fock' initial states",
        ));
    }
    let oracle = ThreeWellOracle::new(cfg.n_atoms as usize, cfg.j, cfg.chi).map_err(value_error)?;
    let times = output_grid(cfg).map_err(value_error)?.times;
    let psi0 = oracle.middle_fock_state();
    let frames: Vec<MomentVector> = times
        .iter()
        .map(|&t| oracle.moments(&oracle.evolve(&psi0, t)))
        .collect();
    let report = criteria::report_exact(&times, &frames).map_err(value_error)?;
    report_to_dict(py, &report, false)
}

/// Initial-state moments implied by a configuration.
#[pyfunction]
fn initial_state_moments<'py>(
    py: Python<'py>,
    config: &PySystemConfig,
) -> PyResult<Bound<'py, PyDict>> {
    let m = initial_moments(&config.inner);
    let dict = PyDict::new(py);
    dict.set_item("mean_n", m.mean_n)?;
    dict.set_item("var_n", m.var_n)?;
    dict.set_item("quad_vars", m.quad_vars.to_vec())?;
    Ok(dict)
}

/// Balanced-beamsplitter witness closed forms for one input family.
#[pyfunction]
#[pyo3(signature = (input, n=None, r=None))]
fn beamsplitter_witnesses<'py>(
    py: Python<'py>,
    input: &str,
    n: Option<f64>,
    r: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = BsConfig::balanced(parse_bs_input(input, n, r)?);
    let (dsp, dsm) = beamsplitter::bs_duan_simon(&cfg).map_err(value_error)?;
    let dict = PyDict::new(py);
    dict.set_item("xi_ab", beamsplitter::bs_xi(&cfg).map_err(value_error)?)?;
    dict.set_item(
        "sigma_ab",
        beamsplitter::bs_sigma(&cfg).map_err(value_error)?,
    )?;
    dict.set_item("DSp_ab", dsp)?;
    dict.set_item("DSm_ab", dsm)?;
    dict.set_item(
        "gamma_ab",
        beamsplitter::bs_reid_gamma(&cfg).map_err(value_error)?,
    )?;
    Ok(dict)
}

/// Same witnesses from the exact truncated-basis transformation, for
/// cross-checking the closed forms.
#[pyfunction]
#[pyo3(signature = (input, n=None, r=None))]
fn beamsplitter_oracle<'py>(
    py: Python<'py>,
    input: &str,
    n: Option<f64>,
    r: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let exact = bs_exact(&parse_bs_input(input, n, r)?);
    let p = &exact.pair;
    let (dsp, dsm) = criteria::pair_duan_simon(p);
    let dict = PyDict::new(py);
    dict.set_item("xi_ab", criteria::pair_xi(p))?;
    dict.set_item("sigma_ab", criteria::pair_sigma(p))?;
    dict.set_item("DSp_ab", dsp)?;
    dict.set_item("DSm_ab", dsm)?;
    dict.set_item(
        "gamma_ab",
        criteria::pair_reid_gamma(p).map_err(value_error)?,
    )?;
    dict.set_item("tail_mass", exact.tail_mass)?;
    Ok(dict)
}

#[pymodule]
fn triwell_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("COLUMNS", COLUMN_NAMES.to_vec())?;
    m.add_class::<PySystemConfig>()?;
    m.add_function(wrap_pyfunction!(analytic_series, m)?)?;
    m.add_function(wrap_pyfunction!(stochastic_series, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_series, m)?)?;
    m.add_function(wrap_pyfunction!(initial_state_moments, m)?)?;
    m.add_function(wrap_pyfunction!(beamsplitter_witnesses, m)?)?;
    m.add_function(wrap_pyfunction!(beamsplitter_oracle, m)?)?;
    Ok(())
}
