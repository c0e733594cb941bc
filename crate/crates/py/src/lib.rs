//! Python bindings: cohorts, per-unit solves, the synthetic generator and
//! full local-versus-global reports.

use std::path::PathBuf;

use deabench_core::io::{read_cohort, read_cohort_file, write_cohort};
use deabench_core::synth::GenSpec;
use deabench_core::{self as core, ExcessMode, ModelSpec, ReturnsToScale, RunInfo};
use pyo3::exceptions::{PyIndexError, PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn dea_err(e: core::DeaError) -> PyErr {
    match e {
        core::DeaError::SolverFailure { .. } => PyRuntimeError::new_err(e.to_string()),
        core::DeaError::IndexOutOfRange { .. } => PyIndexError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn model_spec(rts: &str, efficiency_tolerance: f64, zero_tolerance: f64) -> PyResult<ModelSpec> {
    let rts: ReturnsToScale = rts.parse().map_err(value_err)?;
    ModelSpec::new(rts)
        .with_tolerances(efficiency_tolerance, zero_tolerance)
        .map_err(value_err)
}

/// A validated set of decision-making units.
#[pyclass(name = "Cohort", module = "deabench", frozen)]
struct PyCohort {
    inner: core::Cohort,
}

#[pymethods]
impl PyCohort {
    /// Builds a cohort from `(dmu_id, group, inputs, outputs)` tuples.
    #[new]
    fn new(records: Vec<(String, String, Vec<f64>, Vec<f64>)>) -> PyResult<Self> {
        let records = records
            .into_iter()
            .map(|(id, group, x, y)| core::DmuRecord::new(id, group, x, y))
            .collect();
        let inner = core::validate_cohort(records).map_err(value_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_csv(path: PathBuf) -> PyResult<Self> {
        let inner = read_cohort_file(&path).map_err(|e| value_err(format!("{}: {e}", path.display())))?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_csv_string(text: &str) -> PyResult<Self> {
        let inner = read_cohort(text.as_bytes()).map_err(value_err)?;
        Ok(Self { inner })
    }

    fn to_csv_string(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        write_cohort(&self.inner, &mut buf).map_err(value_err)?;
        String::from_utf8(buf).map_err(value_err)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn n_inputs(&self) -> usize {
        self.inner.n_inputs()
    }

    #[getter]
    fn n_outputs(&self) -> usize {
        self.inner.n_outputs()
    }

    #[getter]
    fn ids(&self) -> Vec<String> {
        self.inner.dmus().iter().map(|d| d.id.clone()).collect()
    }

    /// `(label, size)` pairs in first-appearance order.
    #[getter]
    fn groups(&self) -> Vec<(String, usize)> {
        self.inner
            .groups()
            .iter()
            .map(|g| (g.label.clone(), g.size()))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Cohort(K={}, N={}, M={}, groups={})",
            self.inner.len(),
            self.inner.n_inputs(),
            self.inner.n_outputs(),
            self.inner.groups().len()
        )
    }
}

/// Score, peers, slacks and projection targets of one unit.
#[pyclass(name = "EfficiencyResult", module = "deabench", frozen, get_all)]
struct PyEfficiencyResult {
    dmu_id: String,
    index: usize,
    theta: f64,
    status: String,
    input_slacks: Vec<f64>,
    output_slacks: Vec<f64>,
    input_targets: Vec<f64>,
    output_targets: Vec<f64>,
    peers: Vec<(String, f64)>,
}

impl From<core::EfficiencyResult> for PyEfficiencyResult {
    fn from(r: core::EfficiencyResult) -> Self {
        Self {
            status: r.status.to_string(),
            peers: r.peers.into_iter().map(|p| (p.id, p.weight)).collect(),
            dmu_id: r.dmu_id,
            index: r.index,
            theta: r.theta,
            input_slacks: r.input_slacks,
            output_slacks: r.output_slacks,
            input_targets: r.input_targets,
            output_targets: r.output_targets,
        }
    }
}

#[pymethods]
impl PyEfficiencyResult {
    /// Peer weights keyed by DMU id; zero weights are omitted.
    #[getter]
    fn lambdas<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (id, w) in &self.peers {
            d.set_item(id, w)?;
        }
        Ok(d)
    }

    #[getter]
    fn is_efficient(&self) -> bool {
        self.status == "efficient"
    }

    fn __repr__(&self) -> String {
        format!(
            "EfficiencyResult(dmu_id={:?}, theta={:.6}, status={})",
            self.dmu_id, self.theta, self.status
        )
    }
}

fn resolve_index(cohort: &core::Cohort, dmu: &Bound<'_, PyAny>) -> PyResult<usize> {
    if let Ok(i) = dmu.extract::<usize>() {
        return Ok(i);
    }
    let id: String = dmu.extract()?;
    cohort
        .index_of(&id)
        .ok_or_else(|| PyKeyError::new_err(format!("no DMU with id '{id}'")))
}

/// Scores one unit, given by position or id.
#[pyfunction]
#[pyo3(signature = (cohort, dmu, rts = "crs", efficiency_tolerance = 1e-6, zero_tolerance = 1e-9))]
fn solve_dmu(
    py: Python<'_>,
    cohort: &PyCohort,
    dmu: &Bound<'_, PyAny>,
    rts: &str,
    efficiency_tolerance: f64,
    zero_tolerance: f64,
) -> PyResult<PyEfficiencyResult> {
    let spec = model_spec(rts, efficiency_tolerance, zero_tolerance)?;
    let index = resolve_index(&cohort.inner, dmu)?;
    let result = py
        .detach(|| core::solve_dmu(&cohort.inner, index, &spec))
        .map_err(dea_err)?;
    Ok(result.into())
}

/// Scores every unit against the whole cohort.
#[pyfunction]
#[pyo3(signature = (cohort, rts = "crs", efficiency_tolerance = 1e-6, zero_tolerance = 1e-9))]
fn solve_all(
    py: Python<'_>,
    cohort: &PyCohort,
    rts: &str,
    efficiency_tolerance: f64,
    zero_tolerance: f64,
) -> PyResult<Vec<PyEfficiencyResult>> {
    let spec = model_spec(rts, efficiency_tolerance, zero_tolerance)?;
    let results = py
        .detach(|| core::solve_all(&cohort.inner, &spec))
        .map_err(dea_err)?;
    Ok(results.into_iter().map(Into::into).collect())
}

/// Cohort-size rule per group (or for the pooled cohort) as a list of dicts.
#[pyfunction]
#[pyo3(signature = (cohort, per_group = true))]
fn check_discrimination<'py>(
    py: Python<'py>,
    cohort: &PyCohort,
    per_group: bool,
) -> PyResult<Bound<'py, PyList>> {
    let list = PyList::empty(py);
    for c in core::check_discrimination(&cohort.inner, per_group) {
        let d = PyDict::new(py);
        d.set_item("scope", c.scope)?;
        d.set_item("size", c.size)?;
        d.set_item("threshold", c.threshold)?;
        d.set_item("pass", c.pass)?;
        list.append(d)?;
    }
    Ok(list)
}

/// Seeded synthetic cohort. Without `groups`, uses the nine-group default
/// with 10 inputs and 6 outputs.
#[pyfunction]
#[pyo3(signature = (seed = 0, groups = None, n_inputs = 10, n_outputs = 6,
                    input_range = GenSpec::DEFAULT_INPUT_RANGE,
                    technology_noise = GenSpec::DEFAULT_NOISE))]
fn generate(
    seed: u64,
    groups: Option<Vec<(String, usize)>>,
    n_inputs: usize,
    n_outputs: usize,
    input_range: (f64, f64),
    technology_noise: f64,
) -> PyResult<PyCohort> {
    let mut spec = GenSpec::paper_default(seed);
    if let Some(groups) = groups {
        spec.group_sizes = groups;
    }
    spec.n_inputs = n_inputs;
    spec.n_outputs = n_outputs;
    spec.input_range = input_range;
    spec.technology_noise = technology_noise;
    let inner = core::generate(&spec).map_err(value_err)?;
    Ok(PyCohort { inner })
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// Runs local and global scopes and returns the full report as a dict,
/// with the same layout as the command-line JSON output.
#[pyfunction]
#[pyo3(signature = (cohort, rts = "crs", excess_mode = "all"))]
fn compare_scopes<'py>(
    py: Python<'py>,
    cohort: &PyCohort,
    rts: &str,
    excess_mode: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let spec = model_spec(rts, 1e-6, 1e-9)?;
    let mode: ExcessMode = excess_mode.parse().map_err(value_err)?;
    let run = py
        .detach(|| core::compare_scopes(&cohort.inner, &spec, mode))
        .map_err(dea_err)?;
    let info = RunInfo {
        command: "compare".into(),
        source: "python".into(),
        seed: None,
        spec,
        excess_mode: mode,
    };
    let report = core::ReportBundle::comparison(&cohort.inner, &info, &run);
    json_to_py(py, &report.to_json())
}

#[pymodule]
fn deabench(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyCohort>()?;
    m.add_class::<PyEfficiencyResult>()?;
    m.add_function(wrap_pyfunction!(solve_dmu, m)?)?;
    m.add_function(wrap_pyfunction!(solve_all, m)?)?;
    m.add_function(wrap_pyfunction!(check_discrimination, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(compare_scopes, m)?)?;
    Ok(())
}
