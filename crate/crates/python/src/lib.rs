//! Python bindings: the simulator, stored policies, the metrics toolkit and
//! the training harness.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use tcto_core::evolution::generate_weight_lattice;
use tcto_core::harness::{self, Algorithm, TrainOptions};
use tcto_core::metrics::{self, Direction, FrontMatrix};
use tcto_core::neural::GaussianPolicy;
use tcto_core::sim::{self, ActionVector, Observation, SimConfig, UavMecEnv};
use tcto_core::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Usage(_) | Error::Config(_) | Error::Domain(_) | Error::Dimension { .. } | Error::Empty(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

type Obs = (f64, f64, u32, u32);

fn obs_tuple(o: &Observation) -> Obs {
    (o.x, o.y, o.queue, o.collected)
}

fn config_from(json: Option<&str>) -> PyResult<SimConfig> {
    match json {
        Some(text) => SimConfig::from_json(text).map_err(to_py),
        None => Ok(SimConfig::default()),
    }
}

/// The UAV-assisted MEC simulator.
#[pyclass(name = "Env")]
struct PyEnv {
    inner: UavMecEnv,
}

#[pymethods]
impl PyEnv {
    /// `config_json` is a world configuration as JSON; defaults apply when omitted.
    #[new]
    #[pyo3(signature = (instance_seed, config_json=None))]
    fn new(instance_seed: u64, config_json: Option<&str>) -> PyResult<Self> {
        let inner = UavMecEnv::new(config_from(config_json)?, instance_seed).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Starts an episode; returns `(x, y, queue, collected)`.
    fn reset(&mut self, episode_seed: u64) -> Obs {
        obs_tuple(&self.inner.reset(episode_seed))
    }

    /// Applies `(theta, d, b)`; returns `(obs, (r_delay, r_energy, r_collected), done, outcome_json)`.
    fn step(&mut self, theta: f64, d: f64, b: f64) -> PyResult<(Obs, (f64, f64, f64), bool, String)> {
        let (obs, r, done, outcome) = self.inner.step(ActionVector::new(theta, d, b)).map_err(to_py)?;
        let json = serde_json::to_string(&outcome).map_err(|e| to_py(e.into()))?;
        Ok((obs_tuple(&obs), (r.delay, r.energy, r.collected), done, json))
    }

    /// SD positions as `(x, y)` pairs.
    fn devices(&self) -> Vec<(f64, f64)> {
        self.inner.devices().iter().map(|d| (d.position[0], d.position[1])).collect()
    }

    fn coverage_radius(&self) -> f64 {
        self.inner.coverage()
    }

    fn config_json(&self) -> PyResult<String> {
        serde_json::to_string(self.inner.config()).map_err(|e| to_py(e.into()))
    }
}

/// A trained policy loaded from its JSON blob.
#[pyclass(name = "Policy")]
struct PyPolicy {
    inner: GaussianPolicy,
}

#[pymethods]
impl PyPolicy {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: GaussianPolicy::from_json(text).map_err(to_py)? })
    }

    /// Deterministic action `(theta, d, b)` for an observation tuple.
    fn act(&self, obs: Obs) -> PyResult<(f64, f64, f64)> {
        let o = Observation { x: obs.0, y: obs.1, queue: obs.2, collected: obs.3 };
        let a = self.inner.act_deterministic(&o).map_err(to_py)?;
        Ok((a.theta, a.d, a.b))
    }

    fn log_std(&self) -> [f64; 3] {
        self.inner.log_std()
    }
}

#[pyfunction]
fn propulsion_power(v: f64) -> PyResult<f64> {
    sim::propulsion_power(v, &SimConfig::default().propulsion).map_err(to_py)
}

#[pyfunction]
fn weight_lattice(m: usize, delta: usize) -> PyResult<Vec<Vec<f64>>> {
    Ok(generate_weight_lattice(m, delta).map_err(to_py)?.weights)
}

#[pyfunction]
#[pyo3(signature = (points, z_ref=[0.0; 3]))]
fn hv3(points: Vec<[f64; 3]>, z_ref: [f64; 3]) -> f64 {
    metrics::hv3(&points, z_ref)
}

#[pyfunction]
fn igd(f_true: Vec<[f64; 3]>, f_app: Vec<[f64; 3]>) -> PyResult<f64> {
    let t = FrontMatrix::new(f_true).map_err(to_py)?;
    let a = FrontMatrix::new(f_app).map_err(to_py)?;
    metrics::igd(&t, &a).map_err(to_py)
}

/// Indices of the nondominated points (all objectives maximized).
#[pyfunction]
fn nondominated(points: Vec<Vec<f64>>) -> Vec<usize> {
    tcto_core::pareto::nondominated_indices(&points)
}

/// Returns `(average_ranks, positions)` for a table of instances x algorithms.
#[pyfunction]
#[pyo3(signature = (table, larger_better=true))]
fn friedman_ranks(table: Vec<Vec<f64>>, larger_better: bool) -> PyResult<(Vec<f64>, Vec<usize>)> {
    let dir = if larger_better { Direction::LargerBetter } else { Direction::SmallerBetter };
    let t = metrics::friedman_ranks(&table, dir).map_err(to_py)?;
    Ok((t.average, t.positions))
}

/// The instance table as `(name, K, H)` triples.
#[pyfunction]
fn instances() -> Vec<(String, usize, f64)> {
    harness::standard_instances().into_iter().map(|i| (i.name, i.num_devices, i.altitude)).collect()
}

/// Trains `algo` ("emorl", "nsga2" or "moead") and returns the run manifest as JSON.
#[pyfunction]
#[pyo3(signature = (algo, instance, seed, out, desk_scale=true))]
fn train(py: Python<'_>, algo: &str, instance: &str, seed: u64, out: PathBuf, desk_scale: bool) -> PyResult<String> {
    let algorithm: Algorithm = algo.parse().map_err(to_py)?;
    let mut opts = TrainOptions::new(algorithm, instance, seed, out);
    opts.desk_scale = desk_scale;
    let manifest = py.detach(|| harness::train(&opts)).map_err(to_py)?;
    serde_json::to_string(&manifest).map_err(|e| to_py(e.into()))
}

#[pymodule]
fn tcto(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEnv>()?;
    m.add_class::<PyPolicy>()?;
    m.add_function(wrap_pyfunction!(propulsion_power, m)?)?;
    m.add_function(wrap_pyfunction!(weight_lattice, m)?)?;
    m.add_function(wrap_pyfunction!(hv3, m)?)?;
    m.add_function(wrap_pyfunction!(igd, m)?)?;
    m.add_function(wrap_pyfunction!(nondominated, m)?)?;
    m.add_function(wrap_pyfunction!(friedman_ranks, m)?)?;
    m.add_function(wrap_pyfunction!(instances, m)?)?;
    m.add_function(wrap_pyfunction!(train, m)?)?;
    Ok(())
}
