//! Python bindings: `import dgsim`.
//!
//! Results come back as plain dicts with the same keys as the JSON report
//! files, so they can be fed to pandas or `json.dumps` directly.

use std::path::PathBuf;

use dgsim_core::energy::{rx_energy, tx_energy, EnergyConfig};
use dgsim_core::engine::{self, SimConfig};
use dgsim_core::geom::Point;
use dgsim_core::mobility::{self, FieldConfig, MobilityConfig, ProfileFormat};
use dgsim_core::topology::{self, Edge, StaticGraph};
use dgsim_core::{Error, Policy, RunResult};
use pyo3::exceptions::{PyIOError, PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Bounds { .. } => PyIndexError::new_err(e.to_string()),
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_u64() {
            Some(u) => u.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn result_dict<'py>(py: Python<'py>, r: &RunResult) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(r).expect("run result serializes"))
}

/// Positions of every node at every round of a seeded Random Waypoint run.
#[pyclass(module = "dgsim", frozen)]
struct Profile {
    inner: mobility::MobilityProfile,
}

#[pymethods]
impl Profile {
    #[staticmethod]
    #[pyo3(signature = (node_count=100, static_count=0, v_max=3.0, horizon_rounds=24000, seed=0, round_period=0.25))]
    fn generate(
        node_count: usize,
        static_count: usize,
        v_max: f64,
        horizon_rounds: usize,
        seed: u64,
        round_period: f64,
    ) -> PyResult<Self> {
        let mob = MobilityConfig {
            node_count,
            static_count,
            v_max,
            round_period,
            horizon_rounds,
            seed,
        };
        let inner = mobility::generate_profile(FieldConfig::default(), mob).map_err(py_err)?;
        Ok(Profile { inner })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(Profile {
            inner: mobility::load_profile(&path).map_err(py_err)?,
        })
    }

    /// Binary unless the path ends in `.json`.
    fn save(&self, path: PathBuf) -> PyResult<()> {
        let format = ProfileFormat::from_path(&path);
        mobility::save_profile(&self.inner, &path, format).map_err(py_err)
    }

    fn position_at(&self, node: usize, round: usize) -> PyResult<(f64, f64)> {
        let p = self.inner.position_at(node, round).map_err(py_err)?;
        Ok((p.x, p.y))
    }

    fn positions(&self, round: usize) -> PyResult<Vec<(f64, f64)>> {
        if round >= self.inner.horizon() {
            return Err(py_err(Error::Bounds {
                what: "round",
                index: round,
                limit: self.inner.horizon(),
            }));
        }
        Ok(self.inner.round_positions(round).iter().map(|p| (p.x, p.y)).collect())
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn horizon(&self) -> usize {
        self.inner.horizon()
    }

    #[getter]
    fn static_set(&self) -> Vec<usize> {
        self.inner.static_set().to_vec()
    }

    fn __repr__(&self) -> String {
        let m = self.inner.mobility();
        format!(
            "Profile(node_count={}, static_count={}, v_max={}, horizon={}, seed={})",
            m.node_count, m.static_count, m.v_max, m.horizon_rounds, m.seed
        )
    }
}

/// Energy in joules to send `bits` over `distance` metres.
#[pyfunction(name = "tx_energy")]
fn py_tx_energy(bits: u64, distance: f64) -> f64 {
    tx_energy(&EnergyConfig::default(), bits, distance)
}

#[pyfunction(name = "rx_energy")]
fn py_rx_energy(bits: u64) -> f64 {
    rx_energy(&EnergyConfig::default(), bits)
}

/// Minimum spanning tree of `(u, v, weight)` edges over nodes `0..n`.
/// Raises `ValueError` if the graph is disconnected.
#[pyfunction]
fn prim_mst(n: usize, edges: Vec<(usize, usize, f64)>) -> PyResult<Vec<(usize, usize, f64)>> {
    let mut list = Vec::with_capacity(edges.len());
    for (u, v, w) in edges {
        if u >= n || v >= n || u == v {
            return Err(PyValueError::new_err(format!("bad edge ({u}, {v})")));
        }
        list.push(Edge::new(u, v, w));
    }
    let graph = StaticGraph::from_edges(0, 0..n, list);
    let tree = topology::prim_mst(&graph).map_err(|_| PyValueError::new_err("graph is disconnected"))?;
    Ok(tree.edges().iter().map(|e| (e.u, e.v, e.weight)).collect())
}

/// Whether the unit-disk graph of `positions` with range `tx_range` is connected.
#[pyfunction]
fn is_connected(positions: Vec<(f64, f64)>, tx_range: f64) -> bool {
    let points: Vec<Point> = positions.into_iter().map(Point::from).collect();
    let nodes: Vec<usize> = (0..points.len()).collect();
    topology::is_connected(&nodes, &points, tx_range)
}

fn sim_config(profile: &Profile, tx_range: f64, policy: &str, seed: u64, sufficient_energy: bool) -> PyResult<SimConfig> {
    let policy: Policy = policy.parse().map_err(PyValueError::new_err)?;
    Ok(SimConfig {
        field: profile.inner.field().clone(),
        mobility: profile.inner.mobility().clone(),
        tx_range,
        policy,
        run_seed: seed,
        sufficient_energy,
        ..SimConfig::default()
    })
}

/// Runs one policy over the profile and returns the result as a dict.
#[pyfunction]
#[pyo3(signature = (profile, tx_range=25.0, policy="max-stability", seed=0, sufficient_energy=false))]
fn run_simulation<'py>(
    py: Python<'py>,
    profile: &Profile,
    tx_range: f64,
    policy: &str,
    seed: u64,
    sufficient_energy: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = sim_config(profile, tx_range, policy, seed, sufficient_energy)?;
    let result = py.detach(|| engine::run_simulation(&cfg, &profile.inner)).map_err(py_err)?;
    result_dict(py, &result)
}

/// Runs both policies on the same profile and seed: `(max_stability, mst_dg)`.
#[pyfunction]
#[pyo3(signature = (profile, tx_range=25.0, seed=0, sufficient_energy=false))]
fn run_pairwise<'py>(
    py: Python<'py>,
    profile: &Profile,
    tx_range: f64,
    seed: u64,
    sufficient_energy: bool,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let cfg = sim_config(profile, tx_range, "max-stability", seed, sufficient_energy)?;
    let (max, mst) = py.detach(|| engine::run_pairwise(&cfg, &profile.inner)).map_err(py_err)?;
    Ok((result_dict(py, &max)?, result_dict(py, &mst)?))
}

#[pymodule]
fn dgsim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Profile>()?;
    m.add_function(wrap_pyfunction!(py_tx_energy, m)?)?;
    m.add_function(wrap_pyfunction!(py_rx_energy, m)?)?;
    m.add_function(wrap_pyfunction!(prim_mst, m)?)?;
    m.add_function(wrap_pyfunction!(is_connected, m)?)?;
    m.add_function(wrap_pyfunction!(run_simulation, m)?)?;
    m.add_function(wrap_pyfunction!(run_pairwise, m)?)?;
    Ok(())
}
