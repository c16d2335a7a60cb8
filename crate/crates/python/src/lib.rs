//! Python bindings: polygons, Betti tables, predictions and checks.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use toric_betti::closed_forms::{all_predictions, prediction_u64, Strand};
use toric_betti::engine::{self, EngineOptions, Kp1Verdict, RemovalMode};
use toric_betti::format::{to_ascii, to_json};
use toric_betti::linalg::PrimeModulus;
use toric_betti::polygon::{self, LatticePoint, LatticePolygon};
use toric_betti::{cli, oracle, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::ResourceExceeded(m) => PyMemoryError::new_err(m),
        Error::Inconsistent(m) => PyRuntimeError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A two-dimensional lattice polygon.
#[pyclass(name = "Polygon", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPolygon {
    inner: LatticePolygon,
}

#[pymethods]
impl PyPolygon {
    /// Convex hull of the given integer points.
    #[new]
    fn new(points: Vec<(i64, i64)>) -> PyResult<Self> {
        let inner = LatticePolygon::from_coords(&points).map_err(to_py)?;
        Ok(PyPolygon { inner })
    }

    /// Named model: Sigma, d*Sigma, Upsilon, Upsilon_d, d*Upsilon, Lawrence(a,b).
    #[staticmethod]
    fn model(name: &str) -> PyResult<Self> {
        Ok(PyPolygon {
            inner: cli::parse_model(name).map_err(to_py)?,
        })
    }

    #[getter]
    fn vertices(&self) -> Vec<(i64, i64)> {
        self.inner.vertices().iter().map(|p| (p.x, p.y)).collect()
    }

    #[getter]
    fn points(&self) -> Vec<(i64, i64)> {
        self.inner.points().iter().map(|p| (p.x, p.y)).collect()
    }

    #[getter]
    fn n_points(&self) -> usize {
        self.inner.n_points()
    }

    #[getter]
    fn interior_count(&self) -> usize {
        self.inner.interior_count()
    }

    #[getter]
    fn boundary_count(&self) -> usize {
        self.inner.boundary_count()
    }

    /// Twice the Euclidean area.
    #[getter]
    fn area2(&self) -> u64 {
        self.inner.area2()
    }

    fn lattice_width(&self) -> i64 {
        polygon::lattice_width(&self.inner).0
    }

    fn canonical_form(&self) -> Vec<(i64, i64)> {
        polygon::canonical_form(&self.inner).0.iter().map(|p| (p.x, p.y)).collect()
    }

    fn classify(&self) -> String {
        polygon::classify(&self.inner).tag.to_string()
    }

    fn symmetry_order(&self) -> usize {
        polygon::symmetry_group(&self.inner).len()
    }

    fn prune_vertex(&self, vertex: (i64, i64)) -> PyResult<Self> {
        let inner = self
            .inner
            .prune_vertex(LatticePoint::new(vertex.0, vertex.1))
            .map_err(to_py)?;
        Ok(PyPolygon { inner })
    }

    fn hash(&self) -> String {
        engine::polygon_hash(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Polygon({:?})", self.vertices())
    }
}

/// Rows `q = 1, 2` of a Betti table, `b[ℓ−1] = b_ℓ`, `c[ℓ−1] = c_ℓ`.
#[pyclass(name = "BettiTable", frozen)]
pub struct PyBettiTable {
    inner: engine::BettiTable,
    poly: LatticePolygon,
}

#[pymethods]
impl PyBettiTable {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn b(&self) -> Vec<u64> {
        self.inner.b.clone()
    }

    #[getter]
    fn c(&self) -> Vec<u64> {
        self.inner.c.clone()
    }

    #[getter]
    fn prime(&self) -> u32 {
        self.inner.prime.get()
    }

    #[getter]
    fn provenance_b(&self) -> Vec<&'static str> {
        self.inner.provenance_b.iter().map(|p| p.name()).collect()
    }

    #[getter]
    fn provenance_c(&self) -> Vec<&'static str> {
        self.inner.provenance_c.iter().map(|p| p.name()).collect()
    }

    /// Entry in the printed layout, row `q`, column `p`.
    fn entry(&self, p: usize, q: usize) -> u64 {
        self.inner.entry(p, q)
    }

    /// `{(complex, l, (a, b)): value}` when computed with `bigraded=True`.
    fn bigraded(&self) -> BTreeMap<(String, usize, (i64, i64)), u64> {
        self.inner
            .bigraded
            .iter()
            .map(|((k, ab), v)| ((k.name().to_string(), k.index(), (ab.x, ab.y)), *v))
            .collect()
    }

    fn to_ascii(&self) -> String {
        to_ascii(&self.inner, &[])
    }

    fn to_json(&self) -> String {
        to_json(&self.poly, &self.inner)
    }

    fn __repr__(&self) -> String {
        format!("BettiTable(n={}, b={:?}, c={:?})", self.inner.n, self.inner.b, self.inner.c)
    }
}

fn options(
    prime: u64,
    removal: &str,
    symmetry: bool,
    workers: Option<usize>,
    bigraded: bool,
    audit: bool,
) -> PyResult<EngineOptions> {
    let mut o = EngineOptions::with_prime(PrimeModulus::new(prime).map_err(to_py)?);
    o.removal = removal.parse::<RemovalMode>().map_err(to_py)?;
    o.symmetry = symmetry;
    o.bigraded = bigraded;
    o.audit = audit;
    if let Some(w) = workers {
        o.workers = w.max(1);
    }
    Ok(o)
}

/// Graded Betti table over `F_prime`.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (poly, prime = 40009, removal = "auto", symmetry = true, workers = None, bigraded = false, audit = false))]
fn betti_table(
    py: Python<'_>,
    poly: &PyPolygon,
    prime: u64,
    removal: &str,
    symmetry: bool,
    workers: Option<usize>,
    bigraded: bool,
    audit: bool,
) -> PyResult<PyBettiTable> {
    let o = options(prime, removal, symmetry, workers, bigraded, audit)?;
    let p = poly.inner.clone();
    let inner = py.detach(|| engine::betti_table(&p, &o)).map_err(to_py)?;
    Ok(PyBettiTable { inner, poly: p })
}

/// Brute-force reference table (at most 8 lattice points).
#[pyfunction]
#[pyo3(signature = (poly, prime = 40009))]
fn oracle_betti(poly: &PyPolygon, prime: u64) -> PyResult<PyBettiTable> {
    let prime = PrimeModulus::new(prime).map_err(to_py)?;
    let inner = oracle::oracle_betti(&poly.inner, prime).map_err(to_py)?;
    Ok(PyBettiTable {
        inner,
        poly: poly.inner.clone(),
    })
}

/// Closed-form predictions as `(strand, index, value or None, source, conjectural)`.
#[pyfunction]
fn predict(poly: &PyPolygon) -> Vec<(&'static str, usize, Option<u64>, &'static str, bool)> {
    all_predictions(&poly.inner)
        .iter()
        .map(|e| {
            let strand = match e.strand {
                Strand::Linear => "b",
                Strand::Quadratic => "c",
            };
            (strand, e.index, prediction_u64(e), e.source.tag(), e.source.is_conjectural())
        })
        .collect()
}

type Kp1Tuple = (String, i64, usize, Vec<(usize, u64, bool)>);

/// `(verdict, lattice_width, predicted_first_zero, [(index, value, rigorous)])`.
#[pyfunction]
#[pyo3(signature = (poly, prime = 40009, workers = None))]
fn verify_kp1(
    py: Python<'_>,
    poly: &PyPolygon,
    prime: u64,
    workers: Option<usize>,
) -> PyResult<Kp1Tuple> {
    let o = options(prime, "auto", true, workers, false, false)?;
    let p = poly.inner.clone();
    let r = py.detach(|| engine::verify_kp1(&p, &o)).map_err(to_py)?;
    let verdict = match r.verdict {
        Kp1Verdict::Holds => "holds",
        Kp1Verdict::Fails => "fails",
        Kp1Verdict::ModularOnlyNonzero => "modular-only-nonzero",
    };
    Ok((
        verdict.to_string(),
        r.lattice_width,
        r.predicted_first_zero,
        r.entries.iter().map(|e| (e.index, e.value, e.rigorous)).collect(),
    ))
}

#[pymodule]
fn toric_betti_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolygon>()?;
    m.add_class::<PyBettiTable>()?;
    m.add_function(wrap_pyfunction!(betti_table, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_betti, m)?)?;
    m.add_function(wrap_pyfunction!(predict, m)?)?;
    m.add_function(wrap_pyfunction!(verify_kp1, m)?)?;
    Ok(())
}
