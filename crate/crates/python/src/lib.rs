//! Python bindings for `qlrc-core`.
//!
//! Field elements cross the boundary as packed integers (`sum c_i p^i`);
//! reports come back as plain dicts.

use pyo3::exceptions::{PyOverflowError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;

use qlrc_core::bounds::{self, BoundsError};
use qlrc_core::instance::InstanceError;
use qlrc_core::{CodeInstance, InstanceDump, InstanceSpec, Rng};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn instance_error(e: InstanceError) -> PyErr {
    if e.is_input_error() {
        value_error(e)
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn bounds_error(e: BoundsError) -> PyErr {
    match e {
        BoundsError::TooLarge { .. } => PyOverflowError::new_err(e.to_string()),
        _ => value_error(e),
    }
}

/// Parses JSON text into Python objects with the standard `json` module.
fn from_json<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    PyModule::import(py, "json")?.call_method1("loads", (text,))
}

fn to_json(value: &impl serde::Serialize) -> String {
    serde_json::to_string(value).expect("reports serialize")
}

/// A finite field GF(p^m) with elements packed as integers.
#[pyclass(name = "Field", module = "qlrc", frozen)]
struct PyField {
    inner: qlrc_core::Field,
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (p, m, modulus=None))]
    fn new(p: u64, m: u32, modulus: Option<Vec<u32>>) -> PyResult<Self> {
        let inner = qlrc_core::Field::new(p, m, modulus.as_deref()).map_err(value_error)?;
        Ok(PyField { inner })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.m()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    /// Ascending coefficients of the defining polynomial.
    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.inner.modulus().to_vec()
    }

    fn pack(&self, coeffs: Vec<u32>) -> PyResult<u32> {
        self.inner.pack(&coeffs).map_err(value_error)
    }

    fn coeffs(&self, a: u32) -> PyResult<Vec<u32>> {
        self.check(a)?;
        Ok(self.inner.coeffs(a))
    }

    fn add(&self, a: u32, b: u32) -> PyResult<u32> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.inner.add(a, b))
    }

    fn sub(&self, a: u32, b: u32) -> PyResult<u32> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.inner.sub(a, b))
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.inner.mul(a, b))
    }

    fn inv(&self, a: u32) -> PyResult<u32> {
        self.check(a)?;
        self.inner.inv(a).map_err(value_error)
    }

    fn pow(&self, a: u32, e: u64) -> PyResult<u32> {
        self.check(a)?;
        Ok(self.inner.pow(a, e))
    }

    /// A square root, or `None` for a non-residue.
    fn sqrt(&self, a: u32) -> PyResult<Option<u32>> {
        self.check(a)?;
        Ok(self.inner.sqrt(a))
    }

    fn primitive_element(&self) -> u32 {
        self.inner.primitive_element().value()
    }

    fn __repr__(&self) -> String {
        format!("Field(p={}, m={}, modulus={:?})", self.inner.p(), self.inner.m(), self.inner.modulus())
    }
}

impl PyField {
    fn check(&self, a: u32) -> PyResult<()> {
        if a < self.inner.q() {
            Ok(())
        } else {
            Err(value_error(format!("{a} is not an element of GF({})", self.inner.q())))
        }
    }
}

/// A built dual-containing code together with its construction data.
#[pyclass(name = "Instance", module = "qlrc", frozen)]
struct PyInstance {
    inner: CodeInstance,
}

#[pymethods]
impl PyInstance {
    /// Builds from a spec (JSON text).
    #[staticmethod]
    fn from_spec(text: &str) -> PyResult<Self> {
        let spec = InstanceSpec::from_json(text).map_err(instance_error)?;
        Ok(PyInstance { inner: spec.build().map_err(instance_error)? })
    }

    /// Rebuilds from an instance dump (JSON text), checking it matches.
    #[staticmethod]
    fn from_dump(text: &str) -> PyResult<Self> {
        let dump = InstanceDump::from_json(text).map_err(instance_error)?;
        Ok(PyInstance { inner: dump.to_instance().map_err(instance_error)? })
    }

    /// The GF(32) example with `k = 19`.
    #[staticmethod]
    fn worked_example() -> PyResult<Self> {
        Ok(PyInstance { inner: InstanceSpec::worked_example().build().map_err(instance_error)? })
    }

    /// The instance dump as JSON text.
    fn to_json(&self) -> String {
        InstanceDump::from_instance(&self.inner).to_json()
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField { inner: self.inner.field().clone() }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.r()
    }

    #[getter]
    fn kappa(&self) -> usize {
        bounds::css_params(&self.inner).kappa
    }

    #[getter]
    fn ell(&self) -> Option<usize> {
        self.inner.ell()
    }

    #[getter]
    fn ell_prime(&self) -> Option<usize> {
        self.inner.ell_prime()
    }

    /// True when the multipliers forced a quadratic field extension.
    #[getter]
    fn extended(&self) -> bool {
        self.inner.eval_set().is_extended()
    }

    #[getter]
    fn points(&self) -> Vec<u32> {
        self.inner.eval_set().points().to_vec()
    }

    #[getter]
    fn multipliers(&self) -> Vec<u32> {
        self.inner.eval_set().u().to_vec()
    }

    /// Repair groups as lists of positions.
    #[getter]
    fn blocks(&self) -> Vec<Vec<usize>> {
        self.inner.eval_set().blocks().to_vec()
    }

    /// Ascending coefficients of the good polynomial.
    #[getter]
    fn good_polynomial(&self) -> Vec<u32> {
        self.inner.eval_set().good_polynomial().coeffs().to_vec()
    }

    fn generator(&self) -> Vec<Vec<u32>> {
        self.inner.generator().clone()
    }

    fn dual_generator(&self) -> Vec<Vec<u32>> {
        self.inner.dual_generator().clone()
    }

    fn encode(&self, message: Vec<u32>) -> PyResult<Vec<u32>> {
        self.check_symbols(message.iter().copied())?;
        self.inner.encode_values(&message).map_err(value_error)
    }

    fn in_dual(&self, word: Vec<u32>) -> PyResult<bool> {
        if word.len() != self.inner.n() {
            return Err(value_error(format!("word length {} != n = {}", word.len(), self.inner.n())));
        }
        self.check_symbols(word.iter().copied())?;
        Ok(self.inner.in_dual(&word))
    }

    /// A uniformly random message from the seeded generator.
    fn random_message(&self, seed: u64) -> Vec<u32> {
        self.inner.random_message(&mut Rng::new(seed))
    }

    /// Recovers erased position `z` (given as `None`) from its block; returns
    /// the symbol and the positions read.
    fn repair(&self, received: Vec<Option<u32>>, z: usize) -> PyResult<(u32, Vec<usize>)> {
        self.check_symbols(received.iter().flatten().copied())?;
        self.inner.repair_values(&received, z).map_err(value_error)
    }

    /// Every structural check on this instance: list of `(name, passed, detail)`.
    #[pyo3(signature = (seed=1, trials=100))]
    fn verify(&self, seed: u64, trials: usize) -> PyResult<Vec<(String, bool, String)>> {
        let dump = InstanceDump::from_instance(&self.inner);
        let checks = dump.verify(&mut Rng::new(seed), trials, trials.max(1)).map_err(instance_error)?;
        Ok(checks.into_iter().map(|c| (c.name.to_string(), c.passed, c.detail)).collect())
    }

    /// Distance bounds as a dict; pass `delta_exact` to judge optimality at it.
    #[pyo3(signature = (delta_exact=None))]
    fn bounds<'py>(&self, py: Python<'py>, delta_exact: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
        let report = bounds::bound_report(&self.inner, delta_exact).map_err(bounds_error)?;
        from_json(py, &to_json(&report))
    }

    /// Minimum weight of `C \ C^perp` by full enumeration.
    #[pyo3(signature = (cap=bounds::DEFAULT_BRUTE_FORCE_CAP))]
    fn distance_bruteforce(&self, py: Python<'_>, cap: u64) -> PyResult<usize> {
        py.detach(|| bounds::distance_bruteforce(&self.inner, cap)).map_err(bounds_error)
    }

    /// Per-codeword weight-bound audit on random codewords, as a dict.
    #[pyo3(signature = (trials=200, seed=1))]
    fn weight_bound_audit<'py>(&self, py: Python<'py>, trials: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let report = bounds::weight_bound_audit(&self.inner, trials, &mut Rng::new(seed)).map_err(bounds_error)?;
        from_json(py, &to_json(&report))
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance([{}, {}]_{} locality {}, qLRC [[{}, {}]])",
            self.inner.n(),
            self.inner.k(),
            self.inner.field().q(),
            self.inner.r(),
            self.inner.n(),
            bounds::css_params(&self.inner).kappa
        )
    }
}

impl PyInstance {
    fn check_symbols(&self, symbols: impl IntoIterator<Item = u32>) -> PyResult<()> {
        let q = self.inner.field().q();
        match symbols.into_iter().find(|&s| s >= q) {
            Some(s) => Err(value_error(format!("symbol {s} is not an element of GF({q})"))),
            None => Ok(()),
        }
    }
}

/// `min(r + 1, n - ell)`.
#[pyfunction]
#[pyo3(signature = (n, r, ell=None))]
fn degree_bound(n: usize, r: usize, ell: Option<usize>) -> usize {
    bounds::degree_bound(n, r, ell)
}

/// The AGL bound: `(integer, real value)`.
#[pyfunction]
fn agl_bound(n: usize, r: usize, ell: usize) -> PyResult<(usize, f64)> {
    let b = bounds::agl_bound(n, r, ell).map_err(bounds_error)?;
    Ok((b.integer, b.value))
}

/// Bound report for bare parameters, as a dict.
#[pyfunction]
fn bound_report<'py>(py: Python<'py>, n: usize, k: usize, r: usize, q: u64) -> PyResult<Bound<'py, PyAny>> {
    let report = bounds::bound_report_from_params(n, k, r, q, None).map_err(bounds_error)?;
    from_json(py, &to_json(&report))
}

/// `(kappa, k, degree_bound, agl_bound, agl_bound_real)`.
type SweepTuple = (usize, usize, usize, usize, f64);

/// One row per valid k, by increasing κ.
#[pyfunction]
fn sweep_kappa(n: usize, r: usize, q: u64) -> PyResult<Vec<SweepTuple>> {
    let rows = bounds::sweep_kappa(n, r, q).map_err(bounds_error)?;
    Ok(rows.into_iter().map(|w| (w.kappa, w.k, w.degree_bound, w.agl_bound, w.agl_bound_real)).collect())
}

#[pymodule]
fn qlrc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyInstance>()?;
    m.add_function(wrap_pyfunction!(degree_bound, m)?)?;
    m.add_function(wrap_pyfunction!(agl_bound, m)?)?;
    m.add_function(wrap_pyfunction!(bound_report, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_kappa, m)?)?;
    m.add("DEFAULT_BRUTE_FORCE_CAP", bounds::DEFAULT_BRUTE_FORCE_CAP)?;
    Ok(())
}
