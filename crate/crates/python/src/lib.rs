//! Python bindings: `import pytpc`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use tpc::cayley::{build_cayley, build_from_connection_set, close_connection_set, is_connected};
use tpc::codes::verify_tpc;
use tpc::gf2::construct_cubelike_tpc;
use tpc::group::{conjugacy_classes, enumerate_normal_subgroups, VertexSet};
use tpc::search::{find_tpcs, SearchMode, SearchOptions};
use tpc::spectral::full_report;
use tpc::BitSet;

fn err(e: tpc::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn serialized<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &v)
}

/// A finite group with elements `0..order`, `0` the identity.
#[pyclass(name = "Group", frozen)]
struct PyGroup {
    inner: tpc::Group,
}

#[pymethods]
impl PyGroup {
    /// `spec` is e.g. `cyclic:18`, `dihedral:4`, `sym:3`, `elem2:4`.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(PyGroup { inner: tpc::make_group(spec).map_err(err)? })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    #[getter]
    fn is_abelian(&self) -> bool {
        self.inner.is_abelian()
    }

    fn mul(&self, x: usize, y: usize) -> PyResult<usize> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.inner.mul(x, y))
    }

    fn inv(&self, x: usize) -> PyResult<usize> {
        self.check(x)?;
        Ok(self.inner.inv(x))
    }

    fn format(&self, x: usize) -> PyResult<String> {
        self.check(x)?;
        Ok(self.inner.format_element(x))
    }

    fn parse(&self, text: &str) -> PyResult<Vec<usize>> {
        self.inner.parse_elements(text).map_err(err)
    }

    fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        conjugacy_classes(&self.inner).parts().iter().map(|p| p.to_vec()).collect()
    }

    fn normal_subgroups(&self) -> PyResult<Vec<Vec<usize>>> {
        Ok(enumerate_normal_subgroups(&self.inner).map_err(err)?.iter().map(|h| h.to_vec()).collect())
    }

    fn __repr__(&self) -> String {
        format!("Group({:?}, order={})", self.inner.label(), self.inner.order())
    }
}

impl PyGroup {
    fn check(&self, x: usize) -> PyResult<()> {
        self.inner.set_of(&[x]).map(|_| ()).map_err(err)
    }
}

/// The Cayley graph `Cay(G, S)`: `x ~ y` iff `x y⁻¹ ∈ S`.
#[pyclass(name = "CayleyGraph", frozen)]
struct PyCayleyGraph {
    inner: tpc::CayleyGraph,
}

#[pymethods]
impl PyCayleyGraph {
    /// `close` is `none`, `inverse` or `conjugation`.
    #[new]
    #[pyo3(signature = (group, conn, close = "none"))]
    fn new(group: &PyGroup, conn: Vec<usize>, close: &str) -> PyResult<Self> {
        let g = &group.inner;
        let s = g.set_of(&conn).map_err(err)?;
        let inner = match close {
            "none" => build_cayley(g, &s).map_err(err)?,
            "inverse" | "conjugation" => {
                let cs = close_connection_set(g, &s, close == "conjugation").map_err(err)?;
                build_from_connection_set(g, cs)
            }
            other => return Err(PyValueError::new_err(format!("unknown closure `{other}`"))),
        };
        Ok(PyCayleyGraph { inner })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn connection_set(&self) -> Vec<usize> {
        self.inner.connection_set().set().to_vec()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        if v >= self.inner.order() {
            return Err(PyValueError::new_err(format!("vertex {v} out of range")));
        }
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn adjacency_matrix(&self) -> Vec<Vec<i64>> {
        self.inner.adjacency_matrix()
    }

    fn is_connected(&self) -> bool {
        is_connected(&self.inner)
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    /// `{"ok": bool, "witness": ...}`.
    fn verify<'py>(&self, py: Python<'py>, code: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
        let c = self.inner.group().set_of(&code).map_err(err)?;
        serialized(py, &verify_tpc(&self.inner, &c))
    }

    /// Codes as sorted element lists; `mode="count"` returns an int.
    #[pyo3(signature = (mode = "all", limit = None, canonical = false))]
    fn search<'py>(
        &self,
        py: Python<'py>,
        mode: &str,
        limit: Option<usize>,
        canonical: bool,
    ) -> PyResult<Bound<'py, PyAny>> {
        let mode = match mode {
            "first" => SearchMode::First,
            "all" => SearchMode::All,
            "count" => SearchMode::Count,
            other => return Err(PyValueError::new_err(format!("unknown mode `{other}`"))),
        };
        let opts = SearchOptions { limit, canonical, ..SearchOptions::new(mode) };
        let result = py.detach(|| find_tpcs(&self.inner, &opts));
        if mode == SearchMode::Count {
            return Ok(result.count.into_pyobject(py)?.into_any());
        }
        let codes: Vec<Vec<usize>> = result.solutions.iter().map(VertexSet::to_vec).collect();
        Ok(codes.into_pyobject(py)?.into_any())
    }

    /// Necessary-condition reports; `subgroup` generators are closed to a subgroup.
    #[pyo3(signature = (subgroup = None))]
    fn report<'py>(&self, py: Python<'py>, subgroup: Option<Vec<usize>>) -> PyResult<Bound<'py, PyAny>> {
        let g = self.inner.group();
        let h = match subgroup {
            Some(gens) => Some(tpc::group::closure(g, &g.set_of(&gens).map_err(err)?)),
            None => None,
        };
        let reports = py.detach(|| full_report(&self.inner, h.as_ref())).map_err(err)?;
        serialized(py, &reports)
    }

    fn __repr__(&self) -> String {
        format!(
            "CayleyGraph({:?}, order={}, degree={})",
            self.inner.group().label(),
            self.inner.order(),
            self.inner.degree()
        )
    }
}

/// Linear TPC of the cube-like graph on `V(n, 2)` with connection set `conn`
/// (bit strings, character `i` is coordinate `i`).
#[pyfunction]
#[pyo3(signature = (n, conn, seed = 0))]
fn cubelike<'py>(py: Python<'py>, n: usize, conn: Vec<String>, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let vectors = conn
        .iter()
        .map(|s| BitSet::from_bit_string(s).ok_or_else(|| PyValueError::new_err(format!("malformed bit string `{s}`"))))
        .collect::<PyResult<Vec<_>>>()?;
    if vectors.iter().any(|v| v.universe() != n) {
        return Err(PyValueError::new_err(format!("connection vectors must have length {n}")));
    }
    let code = py.detach(|| construct_cubelike_tpc(n, &vectors, seed)).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("check_matrix", code.check_matrix().to_bit_strings())?;
    out.set_item("dimension", code.log_size())?;
    let basis: Vec<String> = code.kernel_basis().iter().map(BitSet::to_bit_string).collect();
    out.set_item("kernel_basis", basis)?;
    let words: Option<Vec<String>> = code
        .codewords()
        .map(|c| c.iter().map(|x| BitSet::from_u64(n, x as u64).to_bit_string()).collect());
    out.set_item("codewords", words)?;
    Ok(out)
}

#[pymodule]
fn pytpc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyCayleyGraph>()?;
    m.add_function(wrap_pyfunction!(cubelike, m)?)?;
    Ok(())
}
