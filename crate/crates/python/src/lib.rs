use std::path::PathBuf;
use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use lingshift::pipeline::{self, PipelineConfig};
use lingshift::profile::{analyze_document, ProfileOptions, METRIC_NAMES};
use lingshift::readability::{fre_score, ndc_score, ReadabilityInputs};
use lingshift::resources::ResourcePaths;
use lingshift::Error;

create_exception!(lingshift, LingshiftError, PyException, "Raised for every lingshift failure; args are (kind, message).");

fn to_py(e: Error) -> PyErr {
    LingshiftError::new_err((e.kind(), e.to_string()))
}

fn json_to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<PyObject> {
    let text = serde_json::to_string(value).map_err(|e| LingshiftError::new_err(("schema", e.to_string())))?;
    Ok(py.import_bound("json")?.call_method1("loads", (text,))?.unbind())
}

enum Handle {
    Bundled,
    Owned(Arc<lingshift::Resources>),
}

/// Lexicons, word lists and tagger data used by every analysis.
#[pyclass(name = "Resources", module = "lingshift", frozen)]
struct PyResources {
    handle: Handle,
}

impl PyResources {
    fn get(&self) -> &lingshift::Resources {
        match &self.handle {
            Handle::Bundled => lingshift::Resources::bundled(),
            Handle::Owned(r) => r,
        }
    }
}

#[pymethods]
impl PyResources {
    /// Bundled resources, or files in `dir` replacing the bundled ones by name.
    #[new]
    #[pyo3(signature = (dir=None))]
    fn new(dir: Option<PathBuf>) -> PyResult<Self> {
        let handle = match dir {
            None => Handle::Bundled,
            Some(d) => {
                let paths = ResourcePaths {
                    dir: Some(d),
                    ..Default::default()
                };
                Handle::Owned(Arc::new(lingshift::Resources::load(&paths, None).map_err(to_py)?))
            }
        };
        Ok(PyResources { handle })
    }

    /// Per-file provenance, entry counts and the content digest.
    fn report(&self, py: Python<'_>) -> PyResult<PyObject> {
        json_to_py(py, &self.get().report)
    }

    /// Metric name -> value (None when undefined) for one raw abstract.
    #[pyo3(signature = (text, symmetric_overlap=false))]
    fn analyze<'py>(&self, py: Python<'py>, text: &str, symmetric_overlap: bool) -> PyResult<Bound<'py, PyDict>> {
        let opts = ProfileOptions {
            symmetric_overlap,
            ..Default::default()
        };
        let analysis = py.allow_threads(|| analyze_document(text, self.get(), &opts)).map_err(to_py)?;
        let out = PyDict::new_bound(py);
        for (name, value) in METRIC_NAMES.iter().zip(&analysis.profile.values) {
            out.set_item(name, *value)?;
        }
        Ok(out)
    }

    /// Metric families that failed on `text`, as (family, message) pairs.
    fn metric_errors(&self, py: Python<'_>, text: &str) -> PyResult<Vec<(String, String)>> {
        let analysis = py.allow_threads(|| analyze_document(text, self.get(), &ProfileOptions::default())).map_err(to_py)?;
        Ok(analysis.errors.into_iter().map(|e| (e.family, e.message)).collect())
    }

    /// Penn tags for pre-split words.
    fn tag_pos(&self, words: Vec<String>) -> Vec<String> {
        self.get().textkit.tag_pos(&words)
    }

    fn count_syllables(&self, word: &str) -> u32 {
        self.get().textkit.count_syllables(word)
    }

    /// Sentences of a raw abstract, each a list of token surfaces.
    fn sentences(&self, text: &str) -> PyResult<Vec<Vec<String>>> {
        let a = self.get().textkit.analyze_raw(text).map_err(to_py)?;
        Ok(a.sentence_iter().map(|s| s.iter().map(|t| t.surface.clone()).collect()).collect())
    }
}

/// A pipeline configuration; see the README for the JSON keys.
#[pyclass(name = "PipelineConfig", module = "lingshift")]
#[derive(Clone)]
struct PyPipelineConfig {
    inner: PipelineConfig,
}

#[pymethods]
impl PyPipelineConfig {
    /// Parses JSON text; relative paths resolve against `base_dir`.
    #[new]
    #[pyo3(signature = (json="{}", base_dir=None))]
    fn new(json: &str, base_dir: Option<PathBuf>) -> PyResult<Self> {
        let mut inner: PipelineConfig = serde_json::from_str(json).map_err(|e| LingshiftError::new_err(("invalid_config", e.to_string())))?;
        if let Some(base) = base_dir {
            inner.resolve_paths(&base);
        }
        Ok(PyPipelineConfig { inner })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyPipelineConfig {
            inner: PipelineConfig::load(&path).map_err(to_py)?,
        })
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.inner).expect("config serializes")
    }

    fn validate(&self, py: Python<'_>) -> PyResult<PyObject> {
        let report = py.allow_threads(|| pipeline::cmd_validate(&self.inner)).map_err(to_py)?;
        json_to_py(py, &report)
    }

    fn sample(&self, py: Python<'_>) -> PyResult<usize> {
        py.allow_threads(|| pipeline::cmd_sample(&self.inner)).map_err(to_py)
    }

    fn analyze(&self, py: Python<'_>) -> PyResult<PyObject> {
        let summary = py.allow_threads(|| pipeline::cmd_analyze(&self.inner)).map_err(to_py)?;
        json_to_py(py, &summary)
    }

    fn report(&self, py: Python<'_>) -> PyResult<PyObject> {
        let summary = py.allow_threads(|| pipeline::cmd_report(&self.inner)).map_err(to_py)?;
        json_to_py(py, &summary)
    }

    fn new_words(&self, py: Python<'_>) -> PyResult<usize> {
        py.allow_threads(|| pipeline::cmd_new_words(&self.inner)).map_err(to_py)
    }

    fn pos_shift(&self, py: Python<'_>) -> PyResult<usize> {
        py.allow_threads(|| pipeline::cmd_pos_shift(&self.inner)).map_err(to_py)
    }

    #[getter]
    fn output_dir(&self) -> PathBuf {
        self.inner.output_dir.clone()
    }
}

#[pyfunction]
fn strip_markup(text: &str) -> String {
    lingshift::textkit::strip_markup(text)
}

/// New Dale-Chall score from raw counts.
#[pyfunction]
fn ndc(n_words: usize, n_sentences: usize, n_difficult_words: usize) -> PyResult<f64> {
    ndc_score(&ReadabilityInputs::new(n_words, n_sentences, 0, n_difficult_words)).map_err(to_py)
}

/// Flesch Reading Ease from raw counts.
#[pyfunction]
fn fre(n_words: usize, n_sentences: usize, n_syllables: usize) -> PyResult<f64> {
    fre_score(&ReadabilityInputs::new(n_words, n_sentences, n_syllables, 0)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (tokens, window=50))]
fn mattr(tokens: Vec<String>, window: usize) -> PyResult<f64> {
    lingshift::lexical::mattr(&tokens, window).map_err(to_py)
}

/// (D, p) of the two-sample Kolmogorov-Smirnov test.
#[pyfunction]
fn ks_two_sample(a: Vec<f64>, b: Vec<f64>) -> PyResult<(f64, f64)> {
    lingshift::driftstats::ks_two_sample(&a, &b).map_err(to_py)
}

#[pyfunction]
fn cohens_d(a: Vec<f64>, b: Vec<f64>) -> PyResult<f64> {
    lingshift::driftstats::cohens_d(&a, &b).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "lingshift")]
fn lingshift_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("METRIC_NAMES", METRIC_NAMES.to_vec())?;
    m.add("LingshiftError", m.py().get_type_bound::<LingshiftError>())?;
    m.add_class::<PyResources>()?;
    m.add_class::<PyPipelineConfig>()?;
    m.add_function(wrap_pyfunction!(strip_markup, m)?)?;
    m.add_function(wrap_pyfunction!(ndc, m)?)?;
    m.add_function(wrap_pyfunction!(fre, m)?)?;
    m.add_function(wrap_pyfunction!(mattr, m)?)?;
    m.add_function(wrap_pyfunction!(ks_two_sample, m)?)?;
    m.add_function(wrap_pyfunction!(cohens_d, m)?)?;
    Ok(())
}
