//! Python bindings for the `shukla` engine.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use shukla_core::{cyclic, dga, filtered, hochschild, intlin, ktheory};

fn err(e: shukla_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "AbelianGroup", frozen, eq, hash, skip_from_py_object, module = "shukla")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyAbelianGroup(intlin::AbelianGroup);

#[pymethods]
impl PyAbelianGroup {
    /// `Z^free_rank ⊕ ⊕ Z/orders[i]`, normalized to invariant factors.
    #[new]
    #[pyo3(signature = (free_rank=0, orders=Vec::new()))]
    fn new(free_rank: usize, orders: Vec<BigInt>) -> PyResult<Self> {
        if orders.iter().any(|o| o.sign() == num_bigint::Sign::NoSign) {
            return Err(PyValueError::new_err("orders must be nonzero"));
        }
        Ok(PyAbelianGroup(intlin::AbelianGroup::from_orders(free_rank, orders)))
    }

    #[getter]
    fn free_rank(&self) -> usize {
        self.0.free_rank()
    }

    #[getter]
    fn invariant_factors(&self) -> Vec<BigInt> {
        self.0.invariant_factors().to_vec()
    }

    /// `None` when the group is infinite.
    #[getter]
    fn order(&self) -> Option<BigInt> {
        self.0.order()
    }

    fn is_trivial(&self) -> bool {
        self.0.is_trivial()
    }

    fn is_cyclic(&self) -> bool {
        self.0.is_cyclic()
    }

    fn p_part(&self, p: BigInt) -> Self {
        PyAbelianGroup(self.0.p_part(&p))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("AbelianGroup('{}')", self.0)
    }
}

#[pyclass(name = "DGAlgebra", frozen, skip_from_py_object, module = "shukla")]
#[derive(Clone)]
struct PyDGAlgebra(dga::DGAlgebra);

#[pymethods]
impl PyDGAlgebra {
    /// Koszul resolution `Z[t]/t^2, dt = m` of `Z/m`.
    #[staticmethod]
    fn koszul(m: BigInt) -> PyResult<Self> {
        dga::koszul_resolution(&m).map(PyDGAlgebra).map_err(err)
    }

    #[staticmethod]
    fn integers() -> Self {
        PyDGAlgebra(dga::base_ring())
    }

    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        dga::dga_from_toml(text).map(PyDGAlgebra).map_err(err)
    }

    fn to_toml(&self) -> String {
        dga::dga_to_toml(&self.0)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.0.labels().to_vec()
    }

    fn degree(&self, i: usize) -> PyResult<i64> {
        if i >= self.0.dim() {
            return Err(PyValueError::new_err(format!("basis index {i} out of range")));
        }
        Ok(self.0.degree(i))
    }

    fn __repr__(&self) -> String {
        format!("DGAlgebra({:?})", self.0.labels())
    }
}

#[pyclass(name = "FilteredRing", frozen, skip_from_py_object, module = "shukla")]
#[derive(Clone)]
struct PyFilteredRing(filtered::FilteredRing);

#[pymethods]
impl PyFilteredRing {
    /// `p^e`-adic filtration of `Z/p^n`, nonzero in degrees `lo..=0`.
    #[staticmethod]
    #[pyo3(signature = (p, n, e=1))]
    fn adic(p: u64, n: u32, e: u32) -> PyResult<Self> {
        filtered::adic_filtration_power(p, n, e).map(PyFilteredRing).map_err(err)
    }

    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        filtered::filtered_ring_from_toml(text).map(PyFilteredRing).map_err(err)
    }

    fn to_toml(&self) -> PyResult<String> {
        filtered::filtered_ring_to_toml(&self.0).map_err(err)
    }

    fn graded(&self) -> Self {
        PyFilteredRing(self.0.graded())
    }

    #[getter]
    fn lo(&self) -> i64 {
        self.0.lo()
    }

    fn piece(&self, i: i64) -> PyAbelianGroup {
        PyAbelianGroup(self.0.group().group(i))
    }

    /// The level-`k` piece of the `q`-fold filtered tensor power.
    fn tensor_level(&self, q: usize, k: i64) -> PyAbelianGroup {
        let factors = vec![self.0.group(); q];
        PyAbelianGroup(filtered::tensor_level(&factors, k).group())
    }

    /// Checks the simplicial and cyclic identities of the level-`k` cyclic
    /// bar construction through simplicial degree `q`.
    fn cyclic_identities<'py>(&self, py: Python<'py>, q: usize, k: i64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &filtered::cyclic_bar(&self.0, q, k).identities())
    }

    fn graded_comparison<'py>(&self, py: Python<'py>, q: usize, k: i64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &filtered::graded_comparison(&self.0, q, k))
    }
}

fn bound_or(i: i64, bound: Option<i64>) -> i64 {
    bound.unwrap_or(i)
}

#[pyfunction]
#[pyo3(signature = (algebra, i, bound=None))]
fn hh(algebra: &PyDGAlgebra, i: i64, bound: Option<i64>) -> PyResult<PyAbelianGroup> {
    hochschild::hh(&algebra.0, i, bound_or(i, bound)).map(PyAbelianGroup).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (algebra, i, bound=None))]
fn hc(algebra: &PyDGAlgebra, i: i64, bound: Option<i64>) -> PyResult<PyAbelianGroup> {
    cyclic::hc(&algebra.0, i, bound_or(i, bound)).map(PyAbelianGroup).map_err(err)
}

/// Relative cyclic homology of `Z/m -> Z/m_prime`.
#[pyfunction]
#[pyo3(signature = (m, m_prime, i, bound=None))]
fn hc_relative(m: BigInt, m_prime: BigInt, i: i64, bound: Option<i64>) -> PyResult<PyAbelianGroup> {
    let f = dga::reduction_map(&m, &m_prime).map_err(err)?;
    cyclic::hc_relative(&f, i, bound_or(i, bound)).map(PyAbelianGroup).map_err(err)
}

#[pyfunction]
fn mod_p_control(p: u64, n: u32, max_degree: i64) -> PyResult<Vec<PyAbelianGroup>> {
    let groups = cyclic::mod_p_control(p, n, max_degree).map_err(err)?;
    Ok(groups.into_iter().map(PyAbelianGroup).collect())
}

#[pyfunction]
fn hc_tower_surjectivity<'py>(py: Python<'py>, p: u64, n: u32, i: i64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &cyclic::hc_tower_surjectivity(p, n, i).map_err(err)?)
}

#[pyfunction]
fn goodwillie_range<'py>(py: Python<'py>, p: u64, m: u32) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &ktheory::goodwillie_range(p, m).map_err(err)?)
}

#[pyfunction]
fn k_group(p: u64, n: u32, i: i64) -> PyResult<PyAbelianGroup> {
    ktheory::k_group(p, n, i).map(PyAbelianGroup).map_err(err)
}

#[pyfunction]
fn k_table<'py>(py: Python<'py>, p: u64, n: u32) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &ktheory::k_table(p, n).map_err(err)?)
}

type Dense = Vec<Vec<BigInt>>;

/// `(D, U, V)` with `U * M * V = D`.
#[pyfunction]
fn smith_normal_form(rows: Dense) -> PyResult<(Dense, Dense, Dense)> {
    let cols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("rows have different lengths"));
    }
    let m = intlin::SparseIntMatrix::from_dense(rows.len(), cols, &rows);
    let (d, u, v) = intlin::smith_normal_form(&m);
    Ok((d.to_dense(), u.to_dense(), v.to_dense()))
}

/// Runs the command-line tool in-process; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = shukla_core::cli::execute(std::iter::once("shukla".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule(name = "shukla")]
fn shukla_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAbelianGroup>()?;
    m.add_class::<PyDGAlgebra>()?;
    m.add_class::<PyFilteredRing>()?;
    m.add_function(wrap_pyfunction!(hh, m)?)?;
    m.add_function(wrap_pyfunction!(hc, m)?)?;
    m.add_function(wrap_pyfunction!(hc_relative, m)?)?;
    m.add_function(wrap_pyfunction!(mod_p_control, m)?)?;
    m.add_function(wrap_pyfunction!(hc_tower_surjectivity, m)?)?;
    m.add_function(wrap_pyfunction!(goodwillie_range, m)?)?;
    m.add_function(wrap_pyfunction!(k_group, m)?)?;
    m.add_function(wrap_pyfunction!(k_table, m)?)?;
    m.add_function(wrap_pyfunction!(smith_normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
