//! Python bindings: fields, truncation, point evaluation, the Δ oracle and
//! the unit suites.

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rug::{Complex, Float};

use hilbert_kernel::kernelsum::{self, Branch, EvalPoint, TruncationParams};
use hilbert_kernel::numberfield::{make_field, AlgebraicInt, FieldDescriptor, FieldSelector};
use hilbert_kernel::report::decimal;
use hilbert_kernel::{oracle, verify, Error};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::UnsupportedField(_)
        | Error::NarrowClassNumber(_)
        | Error::ZeroElement
        | Error::NotCoprime
        | Error::NotTotallyPositive
        | Error::NotInInverseDifferent
        | Error::InvalidEvalPoint(_)
        | Error::InvalidArgument(_) => PyValueError::new_err(e.to_string()),
        _ => PyArithmeticError::new_err(e.to_string()),
    }
}

fn pair(a: AlgebraicInt) -> (i128, i128) {
    (a.x, a.y)
}

fn elt(v: (i128, i128)) -> AlgebraicInt {
    AlgebraicInt::new(v.0, v.1)
}

/// A supported field: `q`, `sqrt2`, `sqrt5`, `sqrt13` or `sqrt17`.
/// Elements are pairs `(x, y)` meaning `x + y·ω`.
#[pyclass(name = "Field", frozen)]
struct PyField(FieldDescriptor);

#[pymethods]
impl PyField {
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        let sel: FieldSelector = name.parse().map_err(py_err)?;
        Ok(PyField(make_field(sel).map_err(py_err)?))
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.0.selector.name()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree
    }

    #[getter]
    fn discriminant(&self) -> i64 {
        self.0.discriminant
    }

    #[getter]
    fn fundamental_unit(&self) -> (i128, i128) {
        pair(self.0.fundamental_unit)
    }

    #[getter]
    fn totally_positive_unit(&self) -> (i128, i128) {
        pair(self.0.totally_positive_unit)
    }

    #[getter]
    fn unit_index(&self) -> u32 {
        self.0.unit_index
    }

    fn norm(&self, a: (i128, i128)) -> i128 {
        self.0.norm(elt(a))
    }

    fn trace(&self, a: (i128, i128)) -> i128 {
        self.0.trace(elt(a))
    }

    fn mul(&self, a: (i128, i128), b: (i128, i128)) -> (i128, i128) {
        pair(self.0.mul(elt(a), elt(b)))
    }

    fn embeddings(&self, a: (i128, i128)) -> Vec<f64> {
        self.0.embeddings_f64(elt(a))
    }

    /// `(m, ξ ε_t^m)` with the result in the canonical window.
    fn reduce(&self, a: (i128, i128)) -> PyResult<(i64, (i128, i128))> {
        let (m, r) = self.0.reduce_by_units(elt(a)).map_err(py_err)?;
        Ok((m, pair(r)))
    }

    /// Orbit representatives with `|N| ≤ bound`.
    fn reps(&self, bound: u64) -> Vec<(i128, i128)> {
        self.0.enumerate_reps(bound).into_iter().map(pair).collect()
    }

    fn is_coprime(&self, a: (i128, i128), c: (i128, i128)) -> PyResult<bool> {
        self.0.is_coprime(elt(a), elt(c)).map_err(py_err)
    }

    /// `d` with `a·d ≡ 1 (mod c)`.
    fn inverse_mod(&self, a: (i128, i128), c: (i128, i128)) -> PyResult<(i128, i128)> {
        self.0.inverse_mod(elt(a), elt(c)).map(pair).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Field('{}')", self.0.selector.name())
    }
}

/// Truncation of the Kloosterman-type sum.
#[pyclass(name = "Truncation", from_py_object)]
#[derive(Clone, Default)]
struct PyTruncation(TruncationParams);

#[pymethods]
impl PyTruncation {
    #[new]
    #[pyo3(signature = (a_max=40, c_max=40, m_units=8, quad_target=1e-40, p_max=None, branch="AV"))]
    fn new(a_max: u64, c_max: u64, m_units: u32, quad_target: f64, p_max: Option<u64>, branch: &str) -> PyResult<Self> {
        let branch: Branch = branch.parse().map_err(py_err)?;
        let tr = TruncationParams { a_max, c_max, m_units, quad_target, p_max, branch, ..Default::default() };
        tr.validate().map_err(py_err)?;
        Ok(PyTruncation(tr))
    }

    #[getter]
    fn a_max(&self) -> u64 {
        self.0.a_max
    }

    #[getter]
    fn c_max(&self) -> u64 {
        self.0.c_max
    }

    #[getter]
    fn m_units(&self) -> u32 {
        self.0.m_units
    }

    #[getter]
    fn p_max(&self) -> Option<u64> {
        self.0.p_max
    }

    #[getter]
    fn branch(&self) -> &'static str {
        self.0.branch.tag()
    }

    fn __repr__(&self) -> String {
        let t = &self.0;
        format!("Truncation(a_max={}, c_max={}, m_units={}, branch='{}')", t.a_max, t.c_max, t.m_units, t.branch.tag())
    }
}

fn cpx(z: &Complex, digits: usize) -> (String, String) {
    (decimal(z.real(), digits), decimal(z.imag(), digits))
}

/// Every term of the normalized identity at `s = k/2 + δ + i t₀`, as decimal
/// strings (`(re, im)` pairs for complex values).
#[pyfunction]
#[pyo3(signature = (field, k, delta, t0="0", ell=0, prec=256, truncation=None, digits=30))]
#[allow(clippy::too_many_arguments)]
fn evaluate<'py>(
    py: Python<'py>,
    field: &PyField,
    k: u32,
    delta: &str,
    t0: &str,
    ell: usize,
    prec: u32,
    truncation: Option<PyTruncation>,
    digits: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let p = EvalPoint::from_decimal(k, ell, delta, t0, prec).map_err(py_err)?;
    let tr = truncation.unwrap_or_default().0;
    let b = py.detach(|| kernelsum::total(&field.0, &p, &tr)).map_err(py_err)?;
    let d = PyDict::new(py);
    for (key, z) in [("s", p.s()), ("T", &b.t), ("I1n", &b.i1n), ("I2n", &b.i2n), ("I3n", &b.i3n), ("E1", &b.e1), ("E2", &b.e2), ("A", &b.a), ("P_model", &b.p_model)] {
        d.set_item(key, cpx(z, digits))?;
    }
    d.set_item("abs_T", decimal(&Float::with_val(b.t.prec().0, b.t.abs_ref()), digits))?;
    d.set_item("tail_bound", decimal(&b.tail_bound, digits))?;
    d.set_item("tail_bound_T", decimal(&b.tail_bound_t, digits))?;
    d.set_item("terms_evaluated", b.terms_evaluated)?;
    d.set_item("terms_skipped", b.terms_skipped)?;
    Ok(d)
}

/// Bound on the truncation error of `A`, without evaluating any term.
#[pyfunction]
#[pyo3(signature = (field, k, delta, t0="0", ell=0, prec=256, truncation=None))]
fn tail_estimate(field: &PyField, k: u32, delta: &str, t0: &str, ell: usize, prec: u32, truncation: Option<PyTruncation>) -> PyResult<f64> {
    let p = EvalPoint::from_decimal(k, ell, delta, t0, prec).map_err(py_err)?;
    let tr = truncation.unwrap_or_default().0;
    Ok(kernelsum::tail_estimate(&field.0, &p, &tr).map_err(py_err)?.to_f64())
}

/// Ramanujan's `τ(1), …, τ(n)`.
#[pyfunction]
fn tau(n: usize) -> PyResult<Vec<String>> {
    let q = oracle::delta_coefficients(n).map_err(py_err)?;
    Ok(q.coeffs.iter().map(|c| c.to_string()).collect())
}

/// `Λ^{(ℓ)}(Δ, s)` as `(re, im)` decimal strings.
#[pyfunction]
#[pyo3(signature = (s, ell=0, terms=1000, prec=256, digits=30))]
fn lambda_delta(py: Python<'_>, s: num_complex_pair::C, ell: usize, terms: usize, prec: u32, digits: usize) -> PyResult<(String, String)> {
    let s = Complex::with_val(prec, (s.0, s.1));
    let v = py.detach(|| oracle::lambda_delta_deriv(ell, &s, terms, prec)).map_err(py_err)?;
    Ok(cpx(&v.value, digits))
}

mod num_complex_pair {
    use pyo3::prelude::*;
    use pyo3::types::PyComplex;

    /// A Python `complex` or real number.
    pub struct C(pub f64, pub f64);

    impl<'a, 'py> FromPyObject<'a, 'py> for C {
        type Error = PyErr;

        fn extract(ob: Borrowed<'a, 'py, PyAny>) -> PyResult<Self> {
            if let Ok(z) = ob.cast::<PyComplex>() {
                return Ok(C(z.real(), z.imag()));
            }
            Ok(C(ob.extract()?, 0.0))
        }
    }
}

fn to_py<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyArithmeticError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Unit-sum closed-form check over exponents `lambdas`; returns the report.
#[pyfunction]
#[pyo3(signature = (field, lambdas, m_units=8, prec=256))]
fn verify_luo<'py>(py: Python<'py>, field: &PyField, lambdas: Vec<f64>, m_units: u32, prec: u32) -> PyResult<Bound<'py, PyAny>> {
    let ls: Vec<Float> = lambdas.iter().map(|&l| Float::with_val(prec, l)).collect();
    to_py(py, &verify::check_luo(&field.0, &ls, m_units).map_err(py_err)?)
}

/// Seeded unit-reduction window check; returns the report.
#[pyfunction]
#[pyo3(signature = (field, samples=500, seed=1729))]
fn verify_trotabas<'py>(py: Python<'py>, field: &PyField, samples: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &verify::check_trotabas(&field.0, samples, seed).map_err(py_err)?.report)
}

#[pymodule]
fn hilbert_kernel_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyTruncation>()?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(tail_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(tau, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_delta, m)?)?;
    m.add_function(wrap_pyfunction!(verify_luo, m)?)?;
    m.add_function(wrap_pyfunction!(verify_trotabas, m)?)?;
    Ok(())
}
