//! Python extension module `qdet_py`: frames, Hermitian operators, the tilde
//! embeddings, injectivity certification, and state estimation.
//!
//! Build with `cargo build -p qdet-python --release`; the resulting
//! `libqdet_py.so` imports as `qdet_py` (see `python/smoke_test.py`).

use num_complex::Complex;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qdet::construct::{EigenvalueSchedule, ShiftFrameConfig};
use qdet::estimate::{EstimateMode, EstimateOptions};
use qdet::injectivity::InjectivityReport;
use qdet::{FrameVector, MeasurementRecord, ScalarField, TildeVariant};

type C64 = Complex<f64>;

fn err(e: qdet::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_field(field: &str) -> PyResult<ScalarField> {
    match field {
        "real" => Ok(ScalarField::Real),
        "complex" => Ok(ScalarField::Complex),
        other => Err(PyValueError::new_err(format!(
            "unknown field {other:?}, expected \"real\" or \"complex\""
        ))),
    }
}

fn parse_variant(variant: &str) -> PyResult<TildeVariant> {
    match variant {
        "real" => Ok(TildeVariant::RealFull),
        "complex" => Ok(TildeVariant::ComplexFull),
        "real-trace-one" => Ok(TildeVariant::RealTraceOne),
        "complex-trace-one" => Ok(TildeVariant::ComplexTraceOne),
        other => Err(PyValueError::new_err(format!(
            "unknown variant {other:?}, expected \"real\", \"complex\", \"real-trace-one\" or \"complex-trace-one\""
        ))),
    }
}

fn scalar_to_py(py: Python<'_>, z: C64, field: ScalarField) -> Py<PyAny> {
    match field {
        ScalarField::Real => z.re.into_pyobject(py).unwrap().into_any().unbind(),
        ScalarField::Complex => z.into_pyobject(py).unwrap().into_any().unbind(),
    }
}

/// An ordered family of measurement vectors in `R^n` or `C^n`.
#[pyclass(name = "Frame", from_py_object)]
#[derive(Clone)]
struct PyFrame {
    inner: qdet::Frame,
}

#[pymethods]
impl PyFrame {
    /// Build a frame from a list of vectors (lists of numbers; complex
    /// entries imply `field="complex"`).
    #[new]
    #[pyo3(signature = (vectors, field = "real"))]
    fn new(vectors: Vec<Vec<C64>>, field: &str) -> PyResult<Self> {
        let field = parse_field(field)?;
        let vectors = vectors
            .into_iter()
            .map(|v| FrameVector::new(field, v))
            .collect::<qdet::Result<Vec<_>>>()
            .map_err(err)?;
        Ok(PyFrame {
            inner: qdet::Frame::new(field, vectors).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Frame({} vectors, dim {}, {})",
            self.inner.len(),
            self.inner.dim(),
            self.inner.field()
        )
    }

    fn vectors(&self, py: Python<'_>) -> Vec<Vec<Py<PyAny>>> {
        self.inner
            .vectors()
            .iter()
            .map(|v| {
                v.entries()
                    .iter()
                    .map(|&z| scalar_to_py(py, z, self.inner.field()))
                    .collect()
            })
            .collect()
    }

    /// `(spans, rank)` of the plain vector family.
    fn span_check(&self) -> (bool, usize) {
        let check = self.inner.span_check();
        (check.spans, check.rank)
    }

    /// Rows of the tilde matrix for the given variant.
    fn tilde_matrix(&self, variant: &str) -> PyResult<Vec<Vec<f64>>> {
        let tm = qdet::tilde::tilde_matrix(&self.inner, parse_variant(variant)?).map_err(err)?;
        Ok((0..tm.num_rows()).map(|k| tm.row(k).entries().to_vec()).collect())
    }

    fn frame_operator(&self) -> PyOperator {
        PyOperator {
            inner: qdet::frame_ops::frame_operator(&self.inner),
        }
    }

    /// `(lower, upper)` frame bounds.
    fn frame_bounds(&self) -> (f64, f64) {
        let b = qdet::frame_ops::frame_bounds(&self.inner);
        (b.lower, b.upper)
    }

    fn canonical_parseval(&self) -> PyResult<PyFrame> {
        Ok(PyFrame {
            inner: qdet::frame_ops::canonical_parseval(&self.inner).map_err(err)?,
        })
    }

    fn without_vector(&self, k: usize) -> PyResult<PyFrame> {
        if k >= self.inner.len() {
            return Err(PyValueError::new_err(format!("vector index {k} out of range")));
        }
        Ok(PyFrame {
            inner: self.inner.without_vector(k).map_err(err)?,
        })
    }
}

/// A Hermitian operator; construction symmetrizes the input.
#[pyclass(name = "Operator", from_py_object)]
#[derive(Clone)]
struct PyOperator {
    inner: qdet::SelfAdjointOperator,
}

#[pymethods]
impl PyOperator {
    #[new]
    #[pyo3(signature = (entries, field = "real"))]
    fn new(entries: Vec<Vec<C64>>, field: &str) -> PyResult<Self> {
        let field = parse_field(field)?;
        let n = entries.len();
        if entries.iter().any(|row| row.len() != n) {
            return Err(PyValueError::new_err("operator entries must be square"));
        }
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| entries[i][j]);
        Ok(PyOperator {
            inner: qdet::SelfAdjointOperator::new(field, m).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    fn __repr__(&self) -> String {
        format!("Operator(dim {}, {})", self.inner.dim(), self.inner.field())
    }

    fn entries(&self, py: Python<'_>) -> Vec<Vec<Py<PyAny>>> {
        let n = self.inner.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| scalar_to_py(py, self.inner.entry(i, j), self.inner.field()))
                    .collect()
            })
            .collect()
    }

    fn trace(&self) -> f64 {
        self.inner.trace()
    }

    fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    /// Eigenvalues in ascending order.
    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues()
    }
}

fn report_to_dict<'py>(py: Python<'py>, report: &InjectivityReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("variant", report.variant.to_string())?;
    d.set_item("m", report.m)?;
    d.set_item("embed_dim", report.embed_dim)?;
    d.set_item("rank", report.rank)?;
    d.set_item("injective", report.injective)?;
    d.set_item("smallest_kept_singular_value", report.smallest_kept_singular_value)?;
    d.set_item("tolerance", report.tolerance)?;
    Ok(d)
}

#[pyfunction]
fn sum_pairs(n: usize) -> PyResult<PyFrame> {
    Ok(PyFrame {
        inner: qdet::construct::sum_pairs(n).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (n, seed = None))]
fn staircase_real(n: usize, seed: Option<u64>) -> PyResult<PyFrame> {
    Ok(PyFrame {
        inner: qdet::construct::staircase_real(n, seed).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (n, seed = None))]
fn staircase_complex(n: usize, seed: Option<u64>) -> PyResult<PyFrame> {
    Ok(PyFrame {
        inner: qdet::construct::staircase_complex(n, seed).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (n, field = "real", seed = None))]
fn parseval_staircase(n: usize, field: &str, seed: Option<u64>) -> PyResult<PyFrame> {
    let schedule = EigenvalueSchedule::uniform(n).map_err(err)?;
    Ok(PyFrame {
        inner: qdet::construct::parseval_staircase(&schedule, parse_field(field)?, seed).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (truncation, field = "real"))]
fn shift_frame(truncation: usize, field: &str) -> PyResult<PyFrame> {
    let config = match parse_field(field)? {
        ScalarField::Real => ShiftFrameConfig::real(truncation),
        ScalarField::Complex => ShiftFrameConfig::complex(truncation),
    };
    Ok(PyFrame {
        inner: qdet::construct::shift_frame(&config).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (m, n, field = "real", seed = 0))]
fn random_frame(m: usize, n: usize, field: &str, seed: u64) -> PyResult<PyFrame> {
    Ok(PyFrame {
        inner: qdet::construct::random_frame(m, n, parse_field(field)?, seed).map_err(err)?,
    })
}

#[pyfunction]
fn check_injectivity<'py>(py: Python<'py>, frame: &PyFrame, variant: &str) -> PyResult<Bound<'py, PyDict>> {
    let report =
        qdet::injectivity::check_injectivity(&frame.inner, parse_variant(variant)?).map_err(err)?;
    report_to_dict(py, &report)
}

#[pyfunction]
fn witness_operator(frame: &PyFrame, variant: &str) -> PyResult<Option<PyOperator>> {
    Ok(qdet::injectivity::witness_operator(&frame.inner, parse_variant(variant)?)
        .map_err(err)?
        .map(|inner| PyOperator { inner }))
}

#[pyfunction]
fn embed_vector(entries: Vec<C64>, variant: &str) -> PyResult<Vec<f64>> {
    let variant = parse_variant(variant)?;
    let x = FrameVector::new(variant.field(), entries).map_err(err)?;
    Ok(qdet::tilde::embed_vector(&x, variant).map_err(err)?.entries().to_vec())
}

#[pyfunction]
fn embed_operator(op: &PyOperator, variant: &str) -> PyResult<Vec<f64>> {
    Ok(qdet::tilde::embed_operator(&op.inner, parse_variant(variant)?)
        .map_err(err)?
        .entries()
        .to_vec())
}

#[pyfunction]
fn operator_from_dual(entries: Vec<f64>, variant: &str, n: usize) -> PyResult<PyOperator> {
    let dual = qdet::TildeVector::new(parse_variant(variant)?, n, entries).map_err(err)?;
    Ok(PyOperator {
        inner: qdet::tilde::operator_from_dual(&dual).map_err(err)?,
    })
}

#[pyfunction]
fn quadratic_form(op: &PyOperator, entries: Vec<C64>) -> PyResult<f64> {
    let x = FrameVector::new(op.inner.field(), entries).map_err(err)?;
    qdet::quadratic_form(&op.inner, &x).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (frame, op, sigma = 0.0, seed = 0))]
fn simulate_measurements(frame: &PyFrame, op: &PyOperator, sigma: f64, seed: u64) -> PyResult<Vec<f64>> {
    Ok(qdet::estimate::simulate_measurements(&frame.inner, &op.inner, sigma, seed)
        .map_err(err)?
        .values()
        .to_vec())
}

#[pyfunction]
#[pyo3(signature = (frame, measurements, mode = "lsq"))]
fn estimate_state<'py>(
    py: Python<'py>,
    frame: &PyFrame,
    measurements: Vec<f64>,
    mode: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let record = MeasurementRecord::new(measurements).map_err(err)?;
    let mode = match mode {
        "exact" => EstimateMode::Exact,
        "lsq" => EstimateMode::LeastSquares,
        "subset" => EstimateMode::Subset,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown mode {other:?}, expected \"exact\", \"lsq\" or \"subset\""
            )))
        }
    };
    let result =
        qdet::estimate::estimate_state(&frame.inner, &record, &EstimateOptions::mode(mode)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("operator", PyOperator { inner: result.operator.clone() }.into_pyobject(py)?)?;
    d.set_item("solvable", result.solvable)?;
    d.set_item("rank_a", result.rank_a)?;
    d.set_item("rank_b", result.rank_b)?;
    d.set_item("residual", result.residual)?;
    d.set_item("trace", result.trace)?;
    d.set_item("min_eigenvalue", result.min_eigenvalue)?;
    d.set_item("is_state", result.is_state)?;
    Ok(d)
}

#[pyfunction]
fn solvability(frame: &PyFrame, measurements: Vec<f64>, variant: &str) -> PyResult<(usize, usize, bool)> {
    let record = MeasurementRecord::new(measurements).map_err(err)?;
    let sol = qdet::estimate::solvability(&frame.inner, &record, parse_variant(variant)?).map_err(err)?;
    Ok((sol.rank_a, sol.rank_b, sol.solvable))
}

#[pyfunction]
#[pyo3(signature = (op, tol = 1e-8))]
fn validate_state<'py>(py: Python<'py>, op: &PyOperator, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let v = qdet::estimate::validate_state(&op.inner, tol);
    let d = PyDict::new(py);
    d.set_item("trace", v.trace)?;
    d.set_item("min_eigenvalue", v.min_eigenvalue)?;
    d.set_item("is_psd", v.is_psd)?;
    d.set_item("principal_minors_ok", v.principal_minors_ok)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (n, field = "real", seed = 0))]
fn random_state(n: usize, field: &str, seed: u64) -> PyResult<PyOperator> {
    Ok(PyOperator {
        inner: qdet::estimate::random_state(n, parse_field(field)?, seed),
    })
}

#[pyfunction]
#[pyo3(signature = (n, field = "real", seed = 0))]
fn random_hermitian(n: usize, field: &str, seed: u64) -> PyResult<PyOperator> {
    Ok(PyOperator {
        inner: qdet::estimate::random_hermitian(n, parse_field(field)?, seed),
    })
}

#[pyfunction]
fn l1_estimate<'py>(py: Python<'py>, frame: &PyFrame, measurements: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let record = MeasurementRecord::new(measurements).map_err(err)?;
    let result = qdet::separation::l1_estimate(&frame.inner, &record).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("operator", PyOperator { inner: result.operator.clone() }.into_pyobject(py)?)?;
    d.set_item("residual", result.residual)?;
    d.set_item("trace", result.trace)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (m, n, field = "real", trials = 100, seed = 0))]
fn density_experiment<'py>(
    py: Python<'py>,
    m: usize,
    n: usize,
    field: &str,
    trials: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let summary =
        qdet::experiments::density_experiment(m, n, parse_field(field)?, trials, seed).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("trials", summary.trials)?;
    d.set_item("successes", summary.successes)?;
    d.set_item("fraction", summary.fraction)?;
    d.set_item("margin_min", summary.margin_min)?;
    d.set_item("structurally_impossible", summary.structurally_impossible)?;
    Ok(d)
}

#[pymodule]
fn qdet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFrame>()?;
    m.add_class::<PyOperator>()?;
    m.add_function(wrap_pyfunction!(sum_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(staircase_real, m)?)?;
    m.add_function(wrap_pyfunction!(staircase_complex, m)?)?;
    m.add_function(wrap_pyfunction!(parseval_staircase, m)?)?;
    m.add_function(wrap_pyfunction!(shift_frame, m)?)?;
    m.add_function(wrap_pyfunction!(random_frame, m)?)?;
    m.add_function(wrap_pyfunction!(check_injectivity, m)?)?;
    m.add_function(wrap_pyfunction!(witness_operator, m)?)?;
    m.add_function(wrap_pyfunction!(embed_vector, m)?)?;
    m.add_function(wrap_pyfunction!(embed_operator, m)?)?;
    m.add_function(wrap_pyfunction!(operator_from_dual, m)?)?;
    m.add_function(wrap_pyfunction!(quadratic_form, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_measurements, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_state, m)?)?;
    m.add_function(wrap_pyfunction!(solvability, m)?)?;
    m.add_function(wrap_pyfunction!(validate_state, m)?)?;
    m.add_function(wrap_pyfunction!(random_state, m)?)?;
    m.add_function(wrap_pyfunction!(random_hermitian, m)?)?;
    m.add_function(wrap_pyfunction!(l1_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(density_experiment, m)?)?;
    Ok(())
}
