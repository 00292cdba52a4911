//! Python bindings: graph generation, oracles, question sets, prompts and scoring.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use clegr_core::config::{DatasetConfig, GraphProfile};
use clegr_core::eval::{self, Prediction, ScoringOptions};
use clegr_core::forge::{self, DatasetRecord, QuestionInstance};
use clegr_core::oracles::{self, GraphIndex, ROUTE_CAP};
use clegr_core::rng::seeded_rng;
use clegr_core::templates::{OutputType, Registry, Subset};
use clegr_core::textualize::{self, PromptQuestion};
use clegr_core::{Domain, ForgeError, GraphSpec, SizeClass};

fn err(e: ForgeError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr<Err = ForgeError>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

fn to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn from_py<T: serde::de::DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// A generated transit map or computer network.
#[pyclass(name = "Graph", module = "clegr_forge", skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: GraphSpec,
}

#[pymethods]
impl PyGraph {
    #[staticmethod]
    #[pyo3(signature = (domain = "transit", size_class = "standard", seed = 0))]
    fn generate(domain: &str, size_class: &str, seed: u64) -> PyResult<Self> {
        let profile = GraphProfile::default_for(parse::<Domain>(domain)?, parse::<SizeClass>(size_class)?);
        let inner = forge::generate_graph(&profile.sample(seed)).map_err(err)?;
        Ok(PyGraph { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: GraphSpec::from_json(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn domain(&self) -> String {
        self.inner.domain.to_string()
    }

    #[getter]
    fn n_nodes(&self) -> usize {
        self.inner.nodes.len()
    }

    #[getter]
    fn n_edges(&self) -> usize {
        self.inner.edges.len()
    }

    #[getter]
    fn n_lines(&self) -> usize {
        self.inner.lines.len()
    }

    fn node_ids(&self) -> Vec<String> {
        self.inner.nodes.iter().map(|n| n.id.clone()).collect()
    }

    fn node_names(&self) -> Vec<String> {
        self.inner.nodes.iter().map(|n| n.name.clone()).collect()
    }

    fn line_names(&self) -> Vec<String> {
        self.inner.lines.iter().map(|l| l.name.clone()).collect()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    /// Node ids of the hop-minimal path, or None when unreachable.
    fn shortest_path(&self, src: &str, dst: &str) -> PyResult<Option<Vec<String>>> {
        let ix = GraphIndex::new(&self.inner);
        Ok(oracles::shortest_path(&ix, src, dst, None).map_err(err)?.map(|p| p.node_sequence))
    }

    /// Number of simple paths, or None when there are more than `cap`.
    #[pyo3(signature = (src, dst, cap = ROUTE_CAP))]
    fn distinct_routes(&self, src: &str, dst: &str, cap: usize) -> PyResult<Option<usize>> {
        oracles::distinct_routes(&GraphIndex::new(&self.inner), src, dst, cap).map_err(err)
    }

    fn in_cycle(&self, node_id: &str) -> PyResult<bool> {
        oracles::in_cycle(&GraphIndex::new(&self.inner), node_id).map_err(err)
    }

    fn k_hop_count(&self, node_id: &str, k: usize) -> PyResult<usize> {
        oracles::k_hop_count(&GraphIndex::new(&self.inner), node_id, k).map_err(err)
    }

    /// `(nodes_csv, edges_csv)`.
    fn to_csv(&self) -> PyResult<(String, String)> {
        textualize::graph_to_csv(&self.inner).map_err(err)
    }

    /// `(entity_id, kind, sentence)` for every node, then every edge.
    #[pyo3(signature = (graph_id = "g0000"))]
    fn sentences(&self, graph_id: &str) -> PyResult<Vec<(String, String, String)>> {
        let records = textualize::graph_sentences(graph_id, &self.inner).map_err(err)?;
        Ok(records
            .into_iter()
            .map(|r| {
                let kind = match r.kind {
                    textualize::EntityKind::Node => "node",
                    textualize::EntityKind::Edge => "edge",
                };
                (r.entity_id, kind.to_string(), r.sentence)
            })
            .collect())
    }

    /// Up to `per_template` questions per template of the subset.
    #[pyo3(signature = (subset = "facts", per_template = 2, seed = 0))]
    fn questions(&self, subset: &str, per_template: usize, seed: u64) -> PyResult<Vec<PyQuestion>> {
        let registry = Registry::builtin();
        let templates = registry.select(self.inner.domain, parse::<Subset>(subset)?);
        let ix = GraphIndex::new(&self.inner);
        let qs = forge::generate_question_set(&ix, &templates, per_template, &mut seeded_rng(seed, "questions")).map_err(err)?;
        Ok(qs.into_iter().map(|inner| PyQuestion { inner }).collect())
    }

    fn prompt(&self, question: &PyQuestion) -> PyResult<String> {
        let q = &question.inner;
        let pq = PromptQuestion {
            template_id: &q.template_id,
            question: &q.question_text,
            output_type: q.output_type,
            slot_bindings: &q.slot_bindings,
        };
        textualize::build_prompt(&self.inner, pq).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Graph(domain={}, nodes={}, edges={}, lines={})", self.inner.domain, self.n_nodes(), self.n_edges(), self.n_lines())
    }
}

/// One instantiated question with its oracle answer.
#[pyclass(name = "Question", module = "clegr_forge", skip_from_py_object)]
#[derive(Clone)]
struct PyQuestion {
    inner: QuestionInstance,
}

#[pymethods]
impl PyQuestion {
    #[getter]
    fn template_id(&self) -> String {
        self.inner.template_id.clone()
    }

    #[getter]
    fn text(&self) -> String {
        self.inner.question_text.clone()
    }

    #[getter]
    fn answer(&self) -> String {
        self.inner.answer.to_string()
    }

    #[getter]
    fn output_type(&self) -> String {
        self.inner.output_type.to_string()
    }

    #[getter]
    fn group(&self) -> String {
        self.inner.group.to_string()
    }

    #[getter]
    fn scope(&self) -> String {
        self.inner.scope.to_string()
    }

    #[getter]
    fn bindings<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (k, v) in &self.inner.slot_bindings {
            d.set_item(k, v)?;
        }
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Question({}: {:?} -> {})", self.inner.template_id, self.inner.question_text, self.inner.answer)
    }
}

fn dataset_config(config: Option<&Bound<'_, PyAny>>) -> PyResult<DatasetConfig> {
    let cfg = match config {
        Some(c) => from_py::<DatasetConfig>(c)?,
        None => DatasetConfig::default(),
    };
    cfg.validate().map_err(err)?;
    Ok(cfg)
}

/// Builds a dataset in memory; returns `(graphs, records)` with records as dicts.
#[pyfunction]
#[pyo3(signature = (config = None, jobs = 0))]
fn build_dataset<'py>(py: Python<'py>, config: Option<&Bound<'py, PyAny>>, jobs: usize) -> PyResult<(Vec<PyGraph>, Bound<'py, PyAny>)> {
    let cfg = dataset_config(config)?;
    let ds = py.detach(|| forge::build_dataset(&cfg, jobs)).map_err(err)?;
    let graphs = ds.graphs.into_iter().map(|g| PyGraph { inner: g.graph }).collect();
    Ok((graphs, to_py(py, &ds.records)?))
}

/// Writes graphs.jsonl, dataset.jsonl and manifest.json; returns the manifest.
#[pyfunction]
#[pyo3(signature = (out, config = None, jobs = 0))]
fn generate<'py>(py: Python<'py>, out: PathBuf, config: Option<&Bound<'py, PyAny>>, jobs: usize) -> PyResult<Bound<'py, PyAny>> {
    let cfg = dataset_config(config)?;
    let manifest = py.detach(|| clegr_core::cli::cmd_generate(&cfg, &out, jobs)).map_err(|e| PyRuntimeError::new_err(format!("{e:#}")))?;
    to_py(py, &manifest)
}

/// Whether one prediction matches a gold answer of the given output type.
#[pyfunction]
#[pyo3(signature = (output_type, prediction, gold, categorical_prefix = false))]
fn score(output_type: &str, prediction: &str, gold: &str, categorical_prefix: bool) -> PyResult<bool> {
    let record = DatasetRecord {
        question_id: "q".into(),
        graph_id: "g".into(),
        split: forge::Split::Test,
        template_id: String::new(),
        group: clegr_core::templates::Group::Lookup,
        scope: clegr_core::templates::Scope::Node,
        output_type: parse::<OutputType>(output_type)?,
        question: String::new(),
        answer: gold.into(),
        slot_bindings: Default::default(),
    };
    Ok(eval::score_record(&record, prediction, ScoringOptions { categorical_prefix }).map_err(err)?.correct)
}

/// Scores predictions (dicts with question_id and prediction) against
/// dataset records; returns the aggregate report as a dict.
#[pyfunction]
#[pyo3(signature = (records, predictions, allow_missing = false, categorical_prefix = false))]
fn evaluate<'py>(
    py: Python<'py>,
    records: &Bound<'py, PyAny>,
    predictions: &Bound<'py, PyAny>,
    allow_missing: bool,
    categorical_prefix: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let records: Vec<DatasetRecord> = from_py(records)?;
    let predictions: Vec<Prediction> = from_py(predictions)?;
    let (report, _) = eval::evaluate(&records, &predictions, allow_missing, ScoringOptions { categorical_prefix }).map_err(err)?;
    to_py(py, &report)
}

/// Template ids of a domain and subset, in registry order.
#[pyfunction]
#[pyo3(signature = (domain = "transit", subset = "facts"))]
fn template_ids(domain: &str, subset: &str) -> PyResult<Vec<String>> {
    let registry = Registry::builtin();
    Ok(registry.select(parse(domain)?, parse(subset)?).into_iter().map(|t| t.id.clone()).collect())
}

#[pymodule]
fn clegr_forge(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyQuestion>()?;
    m.add_function(wrap_pyfunction!(build_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(score, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(template_ids, m)?)?;
    Ok(())
}
