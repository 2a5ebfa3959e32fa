//! Python bindings. Vertex, edge and hyperedge ids are 0-based throughout.

use std::path::PathBuf;
use std::time::Duration;

use pyo3::exceptions::{PyFileNotFoundError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use algdist::hpart::{DEFAULT_IMBALANCE, DEFAULT_TIMEOUT};
use algdist::io::hgr::{read_hgr, write_hgr};
use algdist::io::mtx::read_matrix_market;
use algdist::matching::{DEFAULT_EPS, DEFAULT_REPETITIONS};
use algdist::relax::{DEFAULT_ITERATIONS, DEFAULT_OMEGA, DEFAULT_RUNS};
use algdist::{
    DistanceMeta, ExternalPartitioner, HpartExperimentConfig, Hyperedge, MatchingAlgorithm, MatchingExperimentConfig, PNorm,
    Partition, Partitioner, RelaxationConfig,
};

fn py_err(e: algdist::Error) -> PyErr {
    match e {
        algdist::Error::Io(io) if io.kind() == std::io::ErrorKind::NotFound => PyFileNotFoundError::new_err(io.to_string()),
        algdist::Error::Io(io) => PyOSError::new_err(io.to_string()),
        algdist::Error::PartitionerMissing(p) => PyFileNotFoundError::new_err(format!("partitioner not found: {}", p.display())),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn norm(p: f64) -> PyResult<PNorm> {
    PNorm::new(p).map_err(py_err)
}

fn relax_config(omega: f64, k: usize, runs: usize, seed: u64) -> RelaxationConfig {
    RelaxationConfig {
        omega,
        iterations: k,
        runs,
        seed,
        ..Default::default()
    }
}

/// Undirected graph with positive edge weights.
#[pyclass(frozen, module = "algdist_py")]
struct Graph {
    inner: algdist::Graph,
}

#[pymethods]
impl Graph {
    /// `edges` holds `(u, v, w)` triples; parallel edges merge by summing.
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> PyResult<Self> {
        Ok(Self {
            inner: algdist::Graph::from_edges(n, edges).map_err(py_err)?,
        })
    }

    /// Reads a Matrix Market coordinate file.
    #[staticmethod]
    fn read_mtx(path: PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: read_matrix_market(path).map_err(py_err)?.graph,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    /// `(u, v, w)` with `u < v`, sorted.
    fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner.edges().map(|e| (e.u, e.v, e.w)).collect()
    }

    fn weighted_degrees(&self) -> Vec<f64> {
        self.inner.weighted_degrees().to_vec()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    /// Subgraph and the original id of each of its vertices.
    fn largest_component(&self) -> (Graph, Vec<usize>) {
        let (g, ids) = self.inner.largest_component();
        (Graph { inner: g }, ids)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.n(), self.inner.num_edges())
    }
}

/// Hypergraph with weighted hyperedges.
#[pyclass(frozen, module = "algdist_py")]
struct Hypergraph {
    inner: algdist::Hypergraph,
}

#[pymethods]
impl Hypergraph {
    #[new]
    #[pyo3(signature = (num_vertices, hyperedges, weights=None))]
    fn new(num_vertices: usize, hyperedges: Vec<Vec<usize>>, weights: Option<Vec<f64>>) -> PyResult<Self> {
        let weights = weights.unwrap_or_else(|| vec![1.0; hyperedges.len()]);
        if weights.len() != hyperedges.len() {
            return Err(PyValueError::new_err("one weight per hyperedge is required"));
        }
        let edges = hyperedges
            .into_iter()
            .zip(weights)
            .map(|(pins, weight)| Hyperedge { pins, weight })
            .collect();
        Ok(Self {
            inner: algdist::Hypergraph::new(num_vertices, edges).map_err(py_err)?,
        })
    }

    /// Reads an hMetis `.hgr` file.
    #[staticmethod]
    fn read_hgr(path: PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: read_hgr(path).map_err(py_err)?,
        })
    }

    /// Writes an hMetis `.hgr` file; weights must be integers.
    fn write_hgr(&self, path: PathBuf) -> PyResult<()> {
        let mut f = std::fs::File::create(path)?;
        write_hgr(&self.inner, &mut f).map_err(py_err)
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.inner.num_vertices()
    }

    #[getter]
    fn num_hyperedges(&self) -> usize {
        self.inner.num_hyperedges()
    }

    fn hyperedges(&self) -> Vec<Vec<usize>> {
        self.inner.hyperedges().iter().map(|e| e.pins.clone()).collect()
    }

    fn weights(&self) -> Vec<f64> {
        self.inner.weights()
    }

    fn __repr__(&self) -> String {
        format!(
            "Hypergraph(vertices={}, hyperedges={})",
            self.inner.num_vertices(),
            self.inner.num_hyperedges()
        )
    }
}

/// The `R` iterate vectors after `k` JOR sweeps from seeded random starts.
#[pyfunction]
#[pyo3(signature = (g, omega=DEFAULT_OMEGA, k=DEFAULT_ITERATIONS, runs=DEFAULT_RUNS, seed=0))]
fn relax(py: Python<'_>, g: &Graph, omega: f64, k: usize, runs: usize, seed: u64) -> PyResult<Vec<Vec<f64>>> {
    let cfg = relax_config(omega, k, runs, seed);
    py.detach(|| algdist::relax(&g.inner, &cfg))
        .map(|it| it.vectors)
        .map_err(py_err)
}

/// Per-edge distances `(u, v, rho)`; `p=float('inf')` takes the max over runs.
#[pyfunction]
#[pyo3(signature = (g, omega=DEFAULT_OMEGA, k=DEFAULT_ITERATIONS, runs=DEFAULT_RUNS, p=f64::INFINITY, seed=0))]
fn edge_distances(
    py: Python<'_>,
    g: &Graph,
    omega: f64,
    k: usize,
    runs: usize,
    p: f64,
    seed: u64,
) -> PyResult<Vec<(usize, usize, f64)>> {
    let p = norm(p)?;
    let cfg = relax_config(omega, k, runs, seed);
    let field = py
        .detach(|| {
            let iters = algdist::relax(&g.inner, &cfg)?;
            let meta = DistanceMeta {
                iterations: k,
                runs,
                p,
                omega,
                seed,
            };
            algdist::edge_distances(&g.inner, &iters, p, meta)
        })
        .map_err(py_err)?;
    Ok(field.pairs.iter().zip(&field.values).map(|(&(i, j), &v)| (i, j, v)).collect())
}

/// Dense solve of `L v = mu D v`: ascending eigenvalues and the
/// D-orthonormal eigenvectors as a list of columns.
#[pyfunction]
fn pencil_eigen(py: Python<'_>, g: &Graph) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let e = py.detach(|| algdist::pencil_eigen(&g.inner)).map_err(py_err)?;
    let vectors = (0..e.n()).map(|i| e.eigenvector(i)).collect();
    Ok((e.mu, vectors))
}

/// `(omega, theta)` pairs; theta is `None` at the cutting point.
#[pyfunction]
fn theta_curve(py: Python<'_>, g: &Graph, omegas: Vec<f64>) -> PyResult<Vec<(f64, Option<f64>)>> {
    let e = py.detach(|| algdist::pencil_eigen(&g.inner)).map_err(py_err)?;
    Ok(algdist::theta_curve(&e, &omegas)
        .into_iter()
        .map(|t| (t.omega, t.theta))
        .collect())
}

fn matching_result(m: algdist::Matching) -> (Vec<(usize, usize)>, f64) {
    (m.edges, m.weight_original)
}

/// Greedy matching; `weights` (one per edge in `Graph.edges()` order)
/// replaces the edge weights for the choices. Returns the matched edges
/// and their total original weight.
#[pyfunction]
#[pyo3(signature = (g, weights=None))]
fn greedy_matching(g: &Graph, weights: Option<Vec<f64>>) -> PyResult<(Vec<(usize, usize)>, f64)> {
    let w = weights.unwrap_or_else(|| g.inner.edge_weights());
    algdist::greedy_matching(&g.inner, &w).map(matching_result).map_err(py_err)
}

/// Path-growing matching; arguments as for `greedy_matching`.
#[pyfunction]
#[pyo3(signature = (g, weights=None))]
fn path_growing_matching(g: &Graph, weights: Option<Vec<f64>>) -> PyResult<(Vec<(usize, usize)>, f64)> {
    let w = weights.unwrap_or_else(|| g.inner.edge_weights());
    algdist::path_growing_matching(&g.inner, &w)
        .map(matching_result)
        .map_err(py_err)
}

/// Matching on original weights versus on distance surrogates, over
/// `seeds` relaxations with seeds `seed, seed + 1, ...`.
#[pyfunction]
#[pyo3(signature = (
    g, algorithm="greedy", seeds=DEFAULT_REPETITIONS, seed=0, omega=DEFAULT_OMEGA, k=DEFAULT_ITERATIONS,
    runs=DEFAULT_RUNS, p=f64::INFINITY, eps=DEFAULT_EPS, invert_surrogate=false
))]
#[allow(clippy::too_many_arguments)]
fn matching_experiment<'py>(
    py: Python<'py>,
    g: &Graph,
    algorithm: &str,
    seeds: usize,
    seed: u64,
    omega: f64,
    k: usize,
    runs: usize,
    p: f64,
    eps: f64,
    invert_surrogate: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let algorithm: MatchingAlgorithm = algorithm.parse().map_err(PyValueError::new_err)?;
    let cfg = MatchingExperimentConfig {
        relax: relax_config(omega, k, runs, seed),
        p: norm(p)?,
        eps,
        repetitions: seeds,
        algorithm,
        invert_surrogate,
    };
    let r = py.detach(|| algdist::matching_experiment(&g.inner, &cfg)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("baseline_weight", r.baseline.weight_original)?;
    d.set_item("baseline_cardinality", r.baseline.cardinality())?;
    d.set_item("seeds", r.trials.iter().map(|t| t.seed).collect::<Vec<_>>())?;
    d.set_item("weights", r.trials.iter().map(|t| t.weight).collect::<Vec<_>>())?;
    d.set_item("weight_ratios", r.trials.iter().map(|t| t.weight_ratio).collect::<Vec<_>>())?;
    d.set_item(
        "cardinality_ratios",
        r.trials.iter().map(|t| t.cardinality_ratio).collect::<Vec<_>>(),
    )?;
    d.set_item("mean_weight_ratio", r.mean_weight_ratio)?;
    d.set_item("mean_cardinality_ratio", r.mean_cardinality_ratio)?;
    Ok(d)
}

/// Per-hyperedge distances computed on the bipartite model.
#[pyfunction]
#[pyo3(signature = (h, omega=DEFAULT_OMEGA, k=DEFAULT_ITERATIONS, runs=DEFAULT_RUNS, seed=0))]
fn hyperedge_distances(py: Python<'_>, h: &Hypergraph, omega: f64, k: usize, runs: usize, seed: u64) -> PyResult<Vec<f64>> {
    let cfg = relax_config(omega, k, runs, seed);
    py.detach(|| algdist::hyperedge_distances(&h.inner, &cfg))
        .map(|d| d.s)
        .map_err(py_err)
}

/// Total original weight of hyperedges spanning both parts.
#[pyfunction]
fn evaluate_cut(h: &Hypergraph, assignment: Vec<usize>) -> PyResult<f64> {
    let part = Partition::new(assignment, 2).map_err(py_err)?;
    algdist::evaluate_cut(&h.inner, &part).map_err(py_err)
}

/// Internal spectral bisection under the given hyperedge weights; returns
/// the part (0 or 1) of each vertex.
#[pyfunction]
#[pyo3(signature = (h, weights=None, imbalance=DEFAULT_IMBALANCE))]
fn fallback_bisect(py: Python<'_>, h: &Hypergraph, weights: Option<Vec<f64>>, imbalance: f64) -> PyResult<Vec<usize>> {
    let w = weights.unwrap_or_else(|| h.inner.weights());
    py.detach(|| algdist::fallback_bisect(&h.inner, &w, imbalance))
        .map(|p| p.assignment().to_vec())
        .map_err(py_err)
}

/// Bisection on original weights versus on inverted hyperedge distances,
/// both priced with original weights. Without `partitioner` the internal
/// bisector is used.
#[pyfunction]
#[pyo3(signature = (
    h, seeds=DEFAULT_REPETITIONS, seed=0, omega=DEFAULT_OMEGA, k=DEFAULT_ITERATIONS, runs=DEFAULT_RUNS,
    eps=DEFAULT_EPS, imbalance=DEFAULT_IMBALANCE, partitioner=None, partitioner_args=None,
    timeout=DEFAULT_TIMEOUT.as_secs_f64()
))]
#[allow(clippy::too_many_arguments)]
fn hpart_experiment<'py>(
    py: Python<'py>,
    h: &Hypergraph,
    seeds: usize,
    seed: u64,
    omega: f64,
    k: usize,
    runs: usize,
    eps: f64,
    imbalance: f64,
    partitioner: Option<PathBuf>,
    partitioner_args: Option<String>,
    timeout: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let partitioner = match partitioner {
        Some(exe) => {
            let mut tool = ExternalPartitioner::new(exe);
            if let Some(a) = partitioner_args {
                tool.args_template = a;
            }
            tool.timeout = Duration::try_from_secs_f64(timeout).map_err(|e| PyValueError::new_err(e.to_string()))?;
            Partitioner::External(tool)
        }
        None => Partitioner::Fallback,
    };
    let cfg = HpartExperimentConfig {
        relax: relax_config(omega, k, runs, seed),
        eps,
        repetitions: seeds,
        imbalance,
        partitioner,
    };
    let r = py.detach(|| algdist::hpart_experiment(&h.inner, &cfg)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("seeds", r.trials.iter().map(|t| t.seed).collect::<Vec<_>>())?;
    d.set_item("baseline_cuts", r.trials.iter().map(|t| t.baseline_cut).collect::<Vec<_>>())?;
    d.set_item("plus_cuts", r.trials.iter().map(|t| t.plus_cut).collect::<Vec<_>>())?;
    d.set_item("ratios", r.trials.iter().map(|t| t.ratio).collect::<Vec<_>>())?;
    d.set_item("mean_ratio", r.mean_ratio)?;
    d.set_item("balance_violations", r.balance_violations)?;
    Ok(d)
}

#[pymodule]
fn algdist_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Hypergraph>()?;
    m.add_function(wrap_pyfunction!(relax, m)?)?;
    m.add_function(wrap_pyfunction!(edge_distances, m)?)?;
    m.add_function(wrap_pyfunction!(pencil_eigen, m)?)?;
    m.add_function(wrap_pyfunction!(theta_curve, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_matching, m)?)?;
    m.add_function(wrap_pyfunction!(path_growing_matching, m)?)?;
    m.add_function(wrap_pyfunction!(matching_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(hyperedge_distances, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_cut, m)?)?;
    m.add_function(wrap_pyfunction!(fallback_bisect, m)?)?;
    m.add_function(wrap_pyfunction!(hpart_experiment, m)?)?;
    Ok(())
}
