//! Python bindings: reduce a Horn function along an integer shift, render
//! the result, and check it numerically against the truncated series.

use std::collections::HashMap;

use pyo3::create_exception;
use pyo3::exceptions::{PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyComplex;

use hornred::catalog::{get_definition, HornDefinition};
use hornred::reduction::{exceptional_conditions, reduce as reduce_core, verify_reduction, ReductionResult};
use hornred::series::{complex_to_f64, eval_series, sample_points, Complex, EvalPoint, DEFAULT_ORDER};
use hornred::{Error, RBig, RationalExpr, Var};

create_exception!(hornred_py, ExceptionalParameters, PyValueError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Exceptional { .. } => ExceptionalParameters::new_err(e.to_string()),
        Error::UnknownFunction { .. } | Error::NotFound(_) => PyKeyError::new_err(e.to_string()),
        Error::Parse { .. } | Error::InvalidArgument(_) | Error::Domain(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn definition(name: &str) -> PyResult<std::sync::Arc<HornDefinition>> {
    get_definition(name).map_err(to_py)
}

/// Parses anything whose `str()` is an expression: ints, `Fraction`s,
/// decimal floats and strings such as `"a + 1"`.
fn expr(obj: &Bound<'_, PyAny>) -> PyResult<RationalExpr> {
    let text = obj.str()?.to_string();
    text.trim().parse().map_err(|e| PyValueError::new_err(format!("{text:?}: {e}")))
}

fn number(obj: &Bound<'_, PyAny>) -> PyResult<RBig> {
    let e = expr(obj)?;
    e.as_rational().ok_or_else(|| PyValueError::new_err(format!("{e} is not a number")))
}

fn exprs(def: &HornDefinition, items: Option<Vec<Bound<'_, PyAny>>>) -> PyResult<Vec<RationalExpr>> {
    let out = match items {
        Some(items) => items.iter().map(expr).collect::<PyResult<Vec<_>>>()?,
        None => def.params.iter().map(|p| RationalExpr::var(*p)).collect(),
    };
    if out.len() != def.params.len() {
        return Err(PyValueError::new_err(format!(
            "{} takes {} parameters ({}), got {}",
            def.name,
            def.params.len(),
            def.param_names().join(", "),
            out.len()
        )));
    }
    Ok(out)
}

fn real_z(z: (Bound<'_, PyAny>, Bound<'_, PyAny>)) -> PyResult<[(RBig, RBig); 2]> {
    Ok([(number(&z.0)?, RBig::ZERO), (number(&z.1)?, RBig::ZERO)])
}

fn complex<'py>(py: Python<'py>, z: &Complex) -> Bound<'py, PyComplex> {
    let (re, im) = complex_to_f64(z);
    PyComplex::from_doubles(py, re, im)
}

fn strings(items: &[RationalExpr]) -> Vec<String> {
    items.iter().map(|e| e.to_string()).collect()
}

/// Names, parameters and rank of every cataloged function.
#[pyfunction]
fn list_functions() -> Vec<(String, Vec<String>, u8)> {
    hornred::list_functions()
}

/// Conditions of the exceptional set met by `params` (empty when generic).
#[pyfunction]
#[pyo3(signature = (function, params))]
fn exceptional(function: &str, params: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<String>> {
    let def = definition(function)?;
    let params = exprs(&def, Some(params))?;
    exceptional_conditions(&def, &params).map_err(to_py)
}

/// Expresses `F(params)` through `F(params + shift)` and its θ-derivatives.
#[pyfunction]
#[pyo3(signature = (function, shift, params=None))]
fn reduce(function: &str, shift: Vec<i64>, params: Option<Vec<Bound<'_, PyAny>>>) -> PyResult<Reduction> {
    let def = definition(function)?;
    let params = exprs(&def, params)?;
    let inner = reduce_core(&def.name, &shift, &params).map_err(to_py)?;
    Ok(Reduction { inner })
}

/// Truncated series and its θ-derivatives at numeric parameters and real z.
#[pyfunction]
#[pyo3(signature = (function, params, z, order=DEFAULT_ORDER))]
fn evaluate<'py>(
    py: Python<'py>,
    function: &str,
    params: Vec<Bound<'py, PyAny>>,
    z: (Bound<'py, PyAny>, Bound<'py, PyAny>),
    order: usize,
) -> PyResult<Evaluation> {
    let def = definition(function)?;
    let values = params.iter().map(number).collect::<PyResult<Vec<_>>>()?;
    exprs(&def, Some(params))?;
    let point = EvalPoint { params: def.params.iter().cloned().zip(values).collect(), z: real_z(z)? };
    let hits = def.exceptional_check(&point.params).map_err(to_py)?;
    if !hits.is_empty() {
        return Err(to_py(Error::Exceptional { function: def.name.clone(), conditions: hits }));
    }
    let r = eval_series(&def, &point, order).map_err(to_py)?;
    Ok(Evaluation {
        value: complex(py, &r.value).unbind(),
        theta1: complex(py, &r.theta1).unbind(),
        theta2: complex(py, &r.theta2).unbind(),
        theta12: complex(py, &r.theta12).unbind(),
        tail_bound: r.tail_bound,
        converged: r.converged,
    })
}

#[pyclass(frozen, module = "hornred_py")]
struct Evaluation {
    #[pyo3(get)]
    value: Py<PyComplex>,
    #[pyo3(get)]
    theta1: Py<PyComplex>,
    #[pyo3(get)]
    theta2: Py<PyComplex>,
    #[pyo3(get)]
    theta12: Py<PyComplex>,
    #[pyo3(get)]
    tail_bound: f64,
    #[pyo3(get)]
    converged: bool,
}

/// Outcome of a numeric check at one point.
#[pyclass(frozen, module = "hornred_py")]
struct Verification {
    /// Values bound to the symbols, as exact rationals.
    #[pyo3(get)]
    values: HashMap<String, String>,
    #[pyo3(get)]
    z: (String, String),
    #[pyo3(get)]
    lhs: Py<PyComplex>,
    #[pyo3(get)]
    rhs: Py<PyComplex>,
    #[pyo3(get)]
    relative_error: f64,
    #[pyo3(get)]
    tail_bound: f64,
    /// `"pass"`, `"FAIL"` or `"inconclusive"`.
    #[pyo3(get)]
    status: String,
}

#[pymethods]
impl Verification {
    fn __repr__(&self) -> String {
        format!("Verification(status={:?}, relative_error={:e})", self.status, self.relative_error)
    }
}

/// `F(J) = (q0 + q1 θ1 + q2 θ2 + q12 θ1θ2) F(J + shift)`.
#[pyclass(frozen, module = "hornred_py")]
struct Reduction {
    inner: ReductionResult,
}

#[pymethods]
impl Reduction {
    #[getter]
    fn function(&self) -> String {
        self.inner.function.clone()
    }
    #[getter]
    fn shift(&self) -> Vec<i64> {
        self.inner.shift.clone()
    }
    #[getter]
    fn params(&self) -> Vec<String> {
        strings(&self.inner.params)
    }
    #[getter]
    fn new_params(&self) -> Vec<String> {
        strings(&self.inner.new_params)
    }
    #[getter]
    fn q0(&self) -> String {
        self.inner.q0().to_string()
    }
    #[getter]
    fn q1(&self) -> String {
        self.inner.q1().to_string()
    }
    #[getter]
    fn q2(&self) -> String {
        self.inner.q2().to_string()
    }
    #[getter]
    fn q12(&self) -> String {
        self.inner.q12().to_string()
    }
    fn to_text(&self) -> String {
        self.inner.to_text()
    }
    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }
    fn to_cas(&self) -> String {
        self.inner.to_cas()
    }
    fn __repr__(&self) -> String {
        format!("Reduction({})", self.inner.to_text())
    }

    /// Checks the identity numerically. Symbols missing from `values` and,
    /// when `z` is omitted, the point itself are sampled with `seed`.
    #[pyo3(signature = (values=None, z=None, order=DEFAULT_ORDER, tol=1e-10, seed=1))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        values: Option<HashMap<String, Bound<'py, PyAny>>>,
        z: Option<(Bound<'py, PyAny>, Bound<'py, PyAny>)>,
        order: usize,
        tol: f64,
        seed: u64,
    ) -> PyResult<Verification> {
        let def = definition(&self.inner.function)?;
        let sample = sample_points(&def, 1, seed).map_err(to_py)?.remove(0);
        let mut bindings: HashMap<Var, RBig> = HashMap::new();
        for (k, e) in self.inner.params.iter().enumerate() {
            if let [v] = e.vars().as_slice() {
                if *e == RationalExpr::var(*v) {
                    bindings.insert(*v, sample.params[&def.params[k]].clone());
                }
            }
        }
        for (name, value) in values.unwrap_or_default() {
            bindings.insert(Var::new(&name), number(&value)?);
        }
        let z = match z {
            Some(z) => real_z(z)?,
            None => sample.z.clone(),
        };
        let point = EvalPoint { params: bindings, z };
        let v = verify_reduction(&self.inner, &point, order, tol).map_err(to_py)?;
        Ok(Verification {
            values: point.params.iter().map(|(k, x)| (k.to_string(), x.to_string())).collect(),
            z: (point.z[0].0.to_string(), point.z[1].0.to_string()),
            lhs: complex(py, &v.lhs).unbind(),
            rhs: complex(py, &v.rhs).unbind(),
            relative_error: v.relative_error,
            tail_bound: v.tail_bound,
            status: v.status.to_string(),
        })
    }
}

#[pymodule]
fn hornred_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(list_functions, m)?)?;
    m.add_function(wrap_pyfunction!(exceptional, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_class::<Reduction>()?;
    m.add_class::<Verification>()?;
    m.add_class::<Evaluation>()?;
    m.add("ExceptionalParameters", m.py().get_type::<ExceptionalParameters>())?;
    Ok(())
}
