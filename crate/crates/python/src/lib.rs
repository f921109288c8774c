//! Python bindings: `import toricbv`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use toricbv::bv::{build_operator, existence, verify_operator, BVSolution};
use toricbv::fanfile::{parse_fan, to_document, CORPUS};
use toricbv::linalg::{fmt_rat, parse_rat};
use toricbv::oracles::DEFAULT_SEED;
use toricbv::report::full_check;
use toricbv::{schouten, wedge_fields, CharacterVector, LatticeVector, Variant, WeightedPolyvector};

fn py_err(e: toricbv::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_delta(parts: &[String]) -> PyResult<CharacterVector> {
    parts
        .iter()
        .map(|p| parse_rat(p).ok_or_else(|| PyValueError::new_err(format!("not a rational: {p}"))))
        .collect::<PyResult<Vec<_>>>()
        .map(CharacterVector)
}

/// A fan given by primitive rays and maximal cones (0-based indices).
#[pyclass(name = "Fan", frozen)]
struct PyFan {
    inner: toricbv::Fan,
}

#[pymethods]
impl PyFan {
    #[new]
    #[pyo3(signature = (dim, rays, max_cones, name=None))]
    fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>, name: Option<String>) -> PyResult<Self> {
        let fan = toricbv::Fan::new(dim, rays.into_iter().map(LatticeVector).collect(), max_cones).map_err(py_err)?;
        Ok(Self { inner: match name { Some(n) => fan.with_name(n), None => fan } })
    }

    /// Parse a JSON fan document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_fan(text).map(|inner| Self { inner }).map_err(py_err)
    }

    /// One of the bundled fans, e.g. "P2" or "blowup16".
    #[staticmethod]
    fn bundled(name: &str) -> PyResult<Self> {
        toricbv::corpus_fan(name)
            .map(|inner| Self { inner })
            .ok_or_else(|| PyValueError::new_err(format!("no bundled fan named {name}")))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn name(&self) -> Option<String> {
        self.inner.name().map(str::to_string)
    }

    #[getter]
    fn rays(&self) -> Vec<Vec<i64>> {
        self.inner.rays().iter().map(|r| r.coords().to_vec()).collect()
    }

    #[getter]
    fn max_cones(&self) -> Vec<Vec<usize>> {
        self.inner.max_cones().to_vec()
    }

    /// (primitive, smooth, complete, messages)
    fn validate(&self) -> PyResult<(bool, bool, bool, Vec<String>)> {
        let r = self.inner.validate().map_err(py_err)?;
        Ok((r.primitive, r.simplicial_smooth, r.complete, r.messages))
    }

    fn to_json(&self) -> String {
        to_document(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Fan({}, dim={}, rays={})", self.inner.name().unwrap_or("?"), self.inner.dim(), self.inner.rays().len())
    }
}

/// Existence data for BV operators.
#[pyclass(name = "BVStatus", frozen, get_all)]
struct PyBVStatus {
    exists: bool,
    solution_dim: Option<usize>,
    active_rays: Vec<usize>,
    particular: Option<Vec<String>>,
    kernel: Vec<Vec<String>>,
    inconsistent_rows: Vec<usize>,
}

impl From<&BVSolution> for PyBVStatus {
    fn from(s: &BVSolution) -> Self {
        let strs = |v: &CharacterVector| v.coords().iter().map(fmt_rat).collect();
        Self {
            exists: s.exists,
            solution_dim: s.solution_dim(),
            active_rays: s.active_rays.clone(),
            particular: s.particular.as_ref().map(strs),
            kernel: s.kernel.iter().map(strs).collect(),
            inconsistent_rows: s.inconsistent_rows(),
        }
    }
}

#[pymethods]
impl PyBVStatus {
    fn __repr__(&self) -> String {
        format!("BVStatus(exists={}, solution_dim={:?})", self.exists, self.solution_dim)
    }
}

/// The algebra of holomorphic polyvector fields of a smooth complete fan.
/// Elements are written like "2*chi(1,0)*e1 - chi(0,0)*e1^e2".
#[pyclass(name = "Algebra", frozen)]
struct PyAlgebra {
    space: toricbv::PolyvectorSpace,
}

impl PyAlgebra {
    fn element(&self, text: &str) -> PyResult<WeightedPolyvector> {
        WeightedPolyvector::parse(text, self.space.dim(), Variant::Toric).map_err(py_err)
    }
}

#[pymethods]
impl PyAlgebra {
    #[new]
    fn new(fan: &PyFan) -> PyResult<Self> {
        toricbv::PolyvectorSpace::new(&fan.inner).map(|space| Self { space }).map_err(py_err)
    }

    /// Dimension of the k-vector fields for k = 0..=n.
    fn dims(&self) -> Vec<usize> {
        self.space.dims()
    }

    fn lattice_points(&self) -> Vec<Vec<i64>> {
        self.space.points().iter().map(|p| p.weight.0.clone()).collect()
    }

    fn basis(&self, degree: usize) -> Vec<String> {
        self.space
            .graded_basis()
            .degrees
            .get(degree)
            .map(|d| d.iter().enumerate().map(|(i, _)| self.space.basis_element(degree, i).to_string()).collect())
            .unwrap_or_default()
    }

    fn contains(&self, a: &str) -> PyResult<bool> {
        Ok(self.space.contains(&self.element(a)?))
    }

    fn wedge(&self, a: &str, b: &str) -> PyResult<String> {
        Ok(wedge_fields(&self.element(a)?, &self.element(b)?).map_err(py_err)?.to_string())
    }

    fn bracket(&self, a: &str, b: &str) -> PyResult<String> {
        Ok(schouten(&self.element(a)?, &self.element(b)?).map_err(py_err)?.to_string())
    }

    fn bv(&self) -> PyResult<PyBVStatus> {
        let sol = existence(self.space.polytope(), self.space.points()).map_err(py_err)?;
        Ok(PyBVStatus::from(&sol))
    }

    /// Matrices of D on degrees 1..=n for the given delta, entries as strings.
    fn operator(&self, delta: Vec<String>) -> PyResult<Vec<Vec<Vec<String>>>> {
        let op = build_operator(&parse_delta(&delta)?, &self.space).map_err(py_err)?;
        Ok(op.matrices.iter().map(|m| (0..m.rows()).map(|i| m.row(i).iter().map(fmt_rat).collect()).collect()).collect())
    }

    /// Apply D for the given delta to an element.
    fn apply(&self, delta: Vec<String>, a: &str) -> PyResult<String> {
        let op = build_operator(&parse_delta(&delta)?, &self.space).map_err(py_err)?;
        Ok(op.apply(&self.space, &self.element(a)?).map_err(py_err)?.to_string())
    }

    /// Runs the operator identities; returns {check: passed}.
    #[pyo3(signature = (delta, seed=DEFAULT_SEED))]
    fn verify(&self, delta: Vec<String>, seed: u64) -> PyResult<Vec<(String, bool)>> {
        let op = build_operator(&parse_delta(&delta)?, &self.space).map_err(py_err)?;
        Ok(verify_operator(&op, &self.space, seed).checks.into_iter().map(|c| (c.check, c.passed)).collect())
    }
}

/// Full oracle suite as a JSON report.
#[pyfunction]
#[pyo3(signature = (fan, seed=DEFAULT_SEED))]
fn check(fan: &PyFan, seed: u64) -> PyResult<(bool, String)> {
    let r = full_check(&fan.inner, seed, false).map_err(py_err)?;
    Ok((r.passed(), r.to_json()))
}

#[pyfunction]
fn bundled_names() -> Vec<&'static str> {
    CORPUS.iter().map(|(n, _)| *n).collect()
}

#[pymodule(name = "toricbv")]
fn toricbv_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFan>()?;
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyBVStatus>()?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(bundled_names, m)?)?;
    Ok(())
}
