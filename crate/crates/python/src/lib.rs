//! Python bindings: the graph type, both enumeration engines, the
//! structural checks, and the branching-number helpers.
//!
//! Vertices cross the boundary as labels (`"u3"`, `"w5"`); solutions as
//! sorted label lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use mcds::analysis;
use mcds::enumerator::{enumerate_mcds, EnumOptions};
use mcds::format::{parse_graph, serialize_graph};
use mcds::generators::{lower_bound_graph, random_convex_graph, RandomParams};
use mcds::graph::{check_convex_ordering, ConvexBipartiteGraph, VertexRef, VertexSet};
use mcds::oracle::{self, enumerate_mcds_bruteforce};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_members(members: Vec<String>) -> PyResult<VertexSet> {
    let mut set = VertexSet::new();
    for label in members {
        let v: VertexRef = label.parse().map_err(value_error)?;
        set.insert(v);
    }
    Ok(set)
}

fn labels(set: &VertexSet) -> Vec<String> {
    set.iter().map(|v| v.to_string()).collect()
}

fn solution_lists(sols: &oracle::SolutionSet) -> Vec<Vec<String>> {
    sols.iter().map(labels).collect()
}

type EnumerateOutput<'py> = (Vec<Vec<String>>, Bound<'py, PyDict>, Option<String>);

/// A convex bipartite graph described by one interval per `U` vertex.
#[pyclass(name = "Graph")]
struct PyGraph {
    inner: ConvexBipartiteGraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n_u: usize, n_w: usize, intervals: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph {
            inner: ConvexBipartiteGraph::new(n_u, n_w, &intervals).map_err(value_error)?,
        })
    }

    /// Parse the `cbg` text format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: parse_graph(text).map_err(value_error)?,
        })
    }

    /// The chain-of-triples family with exactly `3^k` solutions (odd k >= 3).
    #[staticmethod]
    fn lower_bound(k: usize) -> PyResult<Self> {
        Ok(PyGraph {
            inner: lower_bound_graph(k).map_err(value_error)?,
        })
    }

    /// Seeded random connected instance; identical arguments give an
    /// identical graph.
    #[staticmethod]
    #[pyo3(signature = (n_u, n_w, seed, max_retries = 1000))]
    fn random(n_u: usize, n_w: usize, seed: u64, max_retries: usize) -> PyResult<Self> {
        let p = RandomParams {
            n_u,
            n_w,
            seed,
            max_retries,
        };
        Ok(PyGraph {
            inner: random_convex_graph(&p).map_err(value_error)?,
        })
    }

    #[getter]
    fn n_u(&self) -> usize {
        self.inner.n_u()
    }

    #[getter]
    fn n_w(&self) -> usize {
        self.inner.n_w()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn intervals(&self) -> Vec<(usize, usize)> {
        self.inner
            .intervals()
            .iter()
            .map(|iv| (iv.left(), iv.right()))
            .collect()
    }

    fn to_text(&self) -> String {
        serialize_graph(&self.inner)
    }

    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let report = self.inner.validate();
        let d = PyDict::new(py);
        d.set_item("connected", report.connected)?;
        d.set_item("is_star", report.is_star)?;
        d.set_item("star_center", report.star_center.map(|c| c.to_string()))?;
        d.set_item("isolated", labels(&report.isolated_vertices))?;
        Ok(d)
    }

    fn neighbors(&self, label: &str) -> PyResult<Vec<String>> {
        let v: VertexRef = label.parse().map_err(value_error)?;
        Ok(labels(&self.inner.neighbors(v).map_err(value_error)?))
    }

    fn is_dominating(&self, members: Vec<String>) -> PyResult<bool> {
        Ok(self.inner.is_dominating(&parse_members(members)?))
    }

    fn is_connected_induced(&self, members: Vec<String>) -> PyResult<bool> {
        Ok(self.inner.is_connected_induced(&parse_members(members)?))
    }

    fn is_minimal_cds(&self, members: Vec<String>) -> PyResult<bool> {
        Ok(self.inner.is_minimal_cds(&parse_members(members)?))
    }

    fn cut_vertices(&self) -> PyResult<Vec<String>> {
        Ok(labels(&self.inner.cut_vertices().map_err(value_error)?))
    }

    /// All minimal connected dominating sets, by the branching search.
    fn enumerate_mcds(&self) -> Vec<Vec<String>> {
        solution_lists(&enumerate_mcds(&self.inner, &EnumOptions::default()).solutions)
    }

    /// Branching search with statistics and optionally the trace text:
    /// `(solutions, stats_dict, trace_or_None)`.
    #[pyo3(signature = (collect_trace = false))]
    fn enumerate_mcds_full<'py>(
        &self,
        py: Python<'py>,
        collect_trace: bool,
    ) -> PyResult<EnumerateOutput<'py>> {
        let result = enumerate_mcds(&self.inner, &EnumOptions { collect_trace });
        let stats = PyDict::new(py);
        stats.set_item("nodes", result.stats.nodes)?;
        stats.set_item("leaves", result.stats.leaves)?;
        stats.set_item("emitted", result.stats.solutions_emitted)?;
        stats.set_item("duplicates", result.duplicates_discarded)?;
        stats.set_item("max_depth", result.stats.max_depth)?;
        stats.set_item("measure_violations", result.stats.measure_violations)?;
        let steps = PyDict::new(py);
        for (k, v) in &result.stats.step_counts {
            steps.set_item(k, v)?;
        }
        stats.set_item("steps", steps)?;
        let trace = collect_trace.then(|| analysis::render_trace(&result.trace));
        Ok((solution_lists(&result.solutions), stats, trace))
    }

    /// All minimal connected dominating sets, by exhaustive scan.
    #[pyo3(signature = (max_n = 24))]
    fn oracle_mcds(&self, max_n: usize) -> PyResult<Vec<Vec<String>>> {
        Ok(solution_lists(
            &enumerate_mcds_bruteforce(&self.inner, max_n).map_err(value_error)?,
        ))
    }

    /// Run the structural checks over a solution family; returns
    /// human-readable violation strings (empty = all hold).
    fn check_structure(&self, solutions: Vec<Vec<String>>) -> PyResult<Vec<String>> {
        let sols: oracle::SolutionSet = solutions
            .into_iter()
            .map(parse_members)
            .collect::<PyResult<Vec<_>>>()?
            .into_iter()
            .collect();
        let report = oracle::check_lemmas(&self.inner, &sols).map_err(value_error)?;
        Ok(report
            .violations
            .iter()
            .map(|v| {
                format!(
                    "{} on {{{}}} witnesses {:?}",
                    v.check,
                    v.solution,
                    v.witnesses
                        .iter()
                        .map(|w| w.to_string())
                        .collect::<Vec<_>>()
                )
            })
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n_u={}, n_w={}, edges={})",
            self.inner.n_u(),
            self.inner.n_w(),
            self.inner.edge_count()
        )
    }
}

/// Unique positive root of the characteristic polynomial of a branching
/// vector.
#[pyfunction]
#[pyo3(signature = (vector, tol = 1e-12))]
fn branching_number(vector: Vec<u32>, tol: f64) -> PyResult<f64> {
    let v = analysis::BranchingVector::new(vector).map_err(value_error)?;
    analysis::branching_number(&v, tol).map_err(value_error)
}

/// The multiway rule's vector `(t, t+1, .., t+1, 1)` for degree `t >= 3`.
#[pyfunction]
fn step6_vector(t: u32) -> PyResult<Vec<u32>> {
    Ok(analysis::step6_vector(t)
        .map_err(value_error)?
        .entries()
        .to_vec())
}

/// Is `ordering` a convex ordering for the given adjacency lists?
#[pyfunction]
fn is_convex_ordering(
    adjacency: Vec<Vec<usize>>,
    n_w: usize,
    ordering: Vec<usize>,
) -> PyResult<bool> {
    check_convex_ordering(&adjacency, n_w, &ordering).map_err(value_error)
}

/// Verify a recorded trace; returns violation strings (empty = clean).
#[pyfunction]
fn verify_trace(text: &str) -> PyResult<Vec<String>> {
    let report = analysis::verify_measure_trace(text).map_err(value_error)?;
    Ok(report
        .violations
        .iter()
        .map(|v| format!("node {}: {}", v.node, v.message))
        .collect())
}

#[pymodule]
fn mcds_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(branching_number, m)?)?;
    m.add_function(wrap_pyfunction!(step6_vector, m)?)?;
    m.add_function(wrap_pyfunction!(is_convex_ordering, m)?)?;
    m.add_function(wrap_pyfunction!(verify_trace, m)?)?;
    Ok(())
}
