//! Python bindings: branches with their discrete invariants, dual graph
//! rendering, and the full document-driven analysis pipeline.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use jacfol::branch::Branch as CoreBranch;
use jacfol::graph::Resolution;
use jacfol::input::{canonical_document, parse_document, parse_rational};
use jacfol::report::{run_pipeline, Command};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A Puiseux-parametrized branch x = t^mult, y = sum c_j t^j.
#[pyclass(name = "Branch")]
#[derive(Clone)]
struct PyBranch {
    inner: CoreBranch,
}

#[pymethods]
impl PyBranch {
    #[new]
    #[pyo3(signature = (mult, terms, trunc, label = "branch"))]
    fn new(mult: u32, terms: Vec<(u32, String)>, trunc: u32, label: &str) -> PyResult<Self> {
        let terms = terms
            .into_iter()
            .map(|(e, c)| Ok((e, parse_rational(&c).map_err(err)?)))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyBranch {
            inner: CoreBranch::new(mult, terms, trunc, label).map_err(err)?,
        })
    }

    #[getter]
    fn mult(&self) -> u32 {
        self.inner.mult
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label.clone()
    }

    fn is_smooth(&self) -> bool {
        self.inner.is_smooth()
    }

    /// Characteristic exponents in t-units, starting with the multiplicity.
    fn characteristic_exponents(&self) -> PyResult<Vec<u32>> {
        Ok(self.inner.characteristic_data().map_err(err)?.beta)
    }

    fn puiseux_pairs(&self) -> PyResult<Vec<(u32, u32)>> {
        Ok(self.inner.characteristic_data().map_err(err)?.pairs)
    }

    fn semigroup(&self) -> PyResult<Vec<u64>> {
        Ok(self.inner.characteristic_data().map_err(err)?.semigroup)
    }

    fn milnor(&self) -> PyResult<u64> {
        Ok(self.inner.characteristic_data().map_err(err)?.milnor())
    }

    /// Coincidence (maximal Puiseux contact order) with another branch,
    /// as an exact rational string.
    fn coincidence(&self, other: &PyBranch) -> PyResult<String> {
        Ok(self.inner.coincidence(&other.inner).map_err(err)?.to_string())
    }

    fn intersection_multiplicity(&self, other: &PyBranch) -> PyResult<u64> {
        self.inner
            .intersection_multiplicity(&other.inner)
            .map_err(err)
    }

    /// Exact implicit equation as a readable polynomial string.
    fn implicit_equation(&self) -> PyResult<String> {
        Ok(self.inner.implicit_equation().map_err(err)?.to_string_xy())
    }

    fn __repr__(&self) -> String {
        format!(
            "Branch(label={:?}, mult={}, terms={})",
            self.inner.label,
            self.inner.mult,
            self.inner.terms.len()
        )
    }
}

/// DOT rendering of the dual graph of the branch union. For curves with
/// singular branches the ramified graph comes first, followed by the
/// condensed base graph.
#[pyfunction]
fn dual_graph_dot(branches: Vec<PyBranch>) -> PyResult<String> {
    let bs: Vec<CoreBranch> = branches.into_iter().map(|b| b.inner).collect();
    let res = Resolution::build(bs, None).map_err(err)?;
    let mut out = res.upstairs.to_dot();
    if res.ram.order > 1 {
        out.push('\n');
        out.push_str(&res.downstairs_dot());
    }
    Ok(out)
}

/// Run an analysis command against a JSON document; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (document, command, seed = None))]
fn run(document: &str, command: &str, seed: Option<u64>) -> PyResult<String> {
    let mut doc = parse_document(document).map_err(err)?;
    if let Some(s) = seed {
        doc.options.seed = s;
    }
    let cmd = Command::parse(command).map_err(err)?;
    let out = run_pipeline(&doc, cmd).map_err(err)?;
    Ok(out.report.to_json())
}

/// Same as `run` but returns the human-readable text report.
#[pyfunction]
#[pyo3(signature = (document, command, seed = None))]
fn run_text(document: &str, command: &str, seed: Option<u64>) -> PyResult<String> {
    let mut doc = parse_document(document).map_err(err)?;
    if let Some(s) = seed {
        doc.options.seed = s;
    }
    let cmd = Command::parse(command).map_err(err)?;
    let out = run_pipeline(&doc, cmd).map_err(err)?;
    Ok(out.report.render_text())
}

/// Parse and re-emit a document in canonical form.
#[pyfunction]
fn canonicalize(document: &str) -> PyResult<String> {
    let doc = parse_document(document).map_err(err)?;
    let canon = canonical_document(&doc).map_err(err)?;
    serde_json::to_string_pretty(&canon).map_err(err)
}

#[pymodule]
fn jacfol_py(_py: Python<'_>, m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBranch>()?;
    m.add_function(wrap_pyfunction!(dual_graph_dot, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(run_text, m)?)?;
    m.add_function(wrap_pyfunction!(canonicalize, m)?)?;
    Ok(())
}
