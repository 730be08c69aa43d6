//! Python bindings: states, protocol expectations, classification,
//! entanglement measures, mapping verification and tomography.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use slocc_core::entanglement::negativity_min_dm;
use slocc_core::mapping::{expectation_via_mapping, protocol_expectations, recipe, verification_report};
use slocc_core::measurement::{ExactSource, SampledSource};
use slocc_core::{
    classify as classify_values, classify_state as classify_core, fidelity, from_canonical, named_state, negativity_min,
    random_canonical as random_params, three_tangle, tomography as reconstruct, CanonicalParams, MeasurementConfig,
    NamedState, NoiseModel, PauliString, StateDocument, StateVector,
};

fn value_error(e: slocc_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Converts any serializable value into plain Python objects via JSON.
fn to_python<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn noise(depolarizing: f64, readout_sigma: f64) -> PyResult<NoiseModel> {
    let nm = NoiseModel { depolarizing_p: depolarizing, readout_sigma };
    nm.validate().map_err(value_error)?;
    Ok(nm)
}

/// A normalized three-qubit pure state.
#[pyclass(name = "State", module = "slocc", frozen)]
struct PyState {
    inner: StateVector,
    document: StateDocument,
}

impl PyState {
    fn from_document(document: StateDocument) -> PyResult<Self> {
        let inner = document.to_state().map_err(value_error)?;
        Ok(PyState { inner, document })
    }
}

#[pymethods]
impl PyState {
    /// Eight complex amplitudes, qubit 1 as the most significant bit.
    #[new]
    fn new(amplitudes: Vec<Complex64>) -> PyResult<Self> {
        PyState::from_document(StateDocument::Amplitudes(amplitudes.iter().map(|z| [z.re, z.im]).collect()))
    }

    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        let n: NamedState = name.parse().map_err(value_error)?;
        Ok(PyState { inner: named_state(n), document: StateDocument::Named(n) })
    }

    #[staticmethod]
    #[pyo3(signature = (a0, a1, a2, a3, a4, theta=0.0))]
    fn canonical(a0: f64, a1: f64, a2: f64, a3: f64, a4: f64, theta: f64) -> PyResult<Self> {
        let p = CanonicalParams { a0, a1, a2, a3, a4, theta };
        let inner = from_canonical(&p).map_err(value_error)?;
        Ok(PyState { inner, document: StateDocument::Canonical(p) })
    }

    #[staticmethod]
    fn random_canonical(seed: u64) -> PyResult<Self> {
        PyState::from_document(StateDocument::Canonical(random_params(seed)))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        PyState::from_document(StateDocument::from_json(text).map_err(value_error)?)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.document).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    /// `<P>` for a Pauli string such as "xzx" or "IIz".
    fn expectation(&self, pauli: &str) -> PyResult<f64> {
        let p: PauliString = pauli.parse().map_err(value_error)?;
        Ok(slocc_core::expectation(&self.inner, &p))
    }

    /// `<B_index>` read out through the mapping circuit.
    fn expectation_via_mapping(&self, index: usize) -> PyResult<f64> {
        expectation_via_mapping(&self.inner, index).map_err(value_error)
    }

    /// `(<O>, <O1>, <O2>, <O3>)`.
    fn protocol_expectations(&self) -> (f64, f64, f64, f64) {
        let [o, o1, o2, o3] = protocol_expectations(&self.inner);
        (o, o1, o2, o3)
    }

    fn three_tangle(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_python(py, &three_tangle(&self.inner).map_err(value_error)?)
    }

    /// Smallest negativity over the three single-qubit cuts.
    fn negativity(&self) -> PyResult<f64> {
        negativity_min(&self.inner).map_err(value_error)
    }

    fn __repr__(&self) -> PyResult<String> {
        Ok(format!("State({})", self.to_json()?))
    }
}

/// Labels four protocol values; returns `(label, nonzero_mask)`.
#[pyfunction]
#[pyo3(signature = (values, epsilon=slocc_core::classifier::DEFAULT_EPSILON))]
fn classify(values: [f64; 4], epsilon: f64) -> PyResult<(String, [bool; 4])> {
    let r = classify_values(values, epsilon).map_err(value_error)?;
    Ok((r.label.to_string(), r.nonzero_mask))
}

/// Measures and labels a state; `shots=None` evaluates exactly.
#[pyfunction]
#[pyo3(signature = (state, epsilon=slocc_core::classifier::DEFAULT_EPSILON, shots=None, seed=0, depolarizing=0.0, readout_sigma=0.0))]
fn classify_state(
    py: Python<'_>,
    state: &PyState,
    epsilon: f64,
    shots: Option<u64>,
    seed: u64,
    depolarizing: f64,
    readout_sigma: f64,
) -> PyResult<Py<PyAny>> {
    let config = match shots {
        None => MeasurementConfig::Exact,
        Some(shots) => MeasurementConfig::Sampled { shots, seed, noise: noise(depolarizing, readout_sigma)? },
    };
    to_python(py, &classify_core(&state.inner, epsilon, &config).map_err(value_error)?)
}

/// Full 63-row verification of the mapping circuits.
#[pyfunction]
fn verify_mappings(py: Python<'_>) -> PyResult<Py<PyAny>> {
    to_python(py, &verification_report())
}

#[derive(Serialize)]
struct RecipeView {
    index: usize,
    pauli: String,
    circuit: String,
    measured: usize,
    sign: i8,
    corrected: bool,
}

/// Circuit and measured qubit that read out `B_index`.
#[pyfunction]
fn mapping_recipe(py: Python<'_>, index: usize) -> PyResult<Py<PyAny>> {
    let r = recipe(index).map_err(value_error)?;
    to_python(
        py,
        &RecipeView {
            index,
            pauli: r.pauli.to_string(),
            circuit: r.circuit.to_string(),
            measured: r.measured.label(),
            sign: r.sign,
            corrected: r.circuit != r.published_circuit,
        },
    )
}

#[derive(Serialize)]
struct TomographyView {
    fidelity: f64,
    negativity: f64,
    protocol_values: [f64; 4],
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

/// Linear-inversion tomography over all 63 Pauli settings.
#[pyfunction]
#[pyo3(signature = (state, shots=None, seed=0, depolarizing=0.0, readout_sigma=0.0))]
fn tomography(
    py: Python<'_>,
    state: &PyState,
    shots: Option<u64>,
    seed: u64,
    depolarizing: f64,
    readout_sigma: f64,
) -> PyResult<Py<PyAny>> {
    let nm = noise(depolarizing, readout_sigma)?;
    let ideal = state.inner.to_density();
    let rec = match shots {
        None => reconstruct(&ExactSource(&nm.depolarize(&ideal).map_err(value_error)?)),
        Some(shots) => reconstruct(&SampledSource { rho: &ideal, shots, seed, noise: nm }),
    }
    .map_err(value_error)?;
    let m = rec.matrix();
    let part = |f: fn(Complex64) -> f64| (0..8).map(|r| (0..8).map(|c| f(m[(r, c)])).collect()).collect();
    to_python(
        py,
        &TomographyView {
            fidelity: fidelity(&rec, &ideal).map_err(value_error)?,
            negativity: negativity_min_dm(&rec).map_err(value_error)?,
            protocol_values: slocc_core::mapping::protocol_expectations_dm(&rec),
            re: part(|z| z.re),
            im: part(|z| z.im),
        },
    )
}

#[pymodule]
fn slocc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(classify_state, m)?)?;
    m.add_function(wrap_pyfunction!(verify_mappings, m)?)?;
    m.add_function(wrap_pyfunction!(mapping_recipe, m)?)?;
    m.add_function(wrap_pyfunction!(tomography, m)?)?;
    m.add("NAMED_STATES", NamedState::ALL.map(|s| s.to_string()).to_vec())?;
    Ok(())
}
