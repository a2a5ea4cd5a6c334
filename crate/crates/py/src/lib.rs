//! Python bindings: the `OrthoMatrix` class plus free functions for the
//! transfer, the gap bound, and certificate scans. Reports come back as
//! plain dicts mirroring the CLI's JSON output.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subinv::certificate::build_certificate;
use subinv::extremal::{random_rotation, tetrahedron_config};
use subinv::hopf::{config_from_matrix, matrix_from_config, transfer_identity_check, RowConfig};
use subinv::io::CertificateDump;
use subinv::oracle::brute_force_best_pair;
use subinv::polygon::{check_corollary, Polygon};
use subinv::selection::select_certified;
use subinv::{random_ortho, validate_ortho, OrthoMatrix, TOL_ORTH};

fn err(e: subinv::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Rebuilds a `serde_json::Value` as native Python objects, so every report
/// type serializes once and reads identically from the CLI and from Python.
fn json_to_py<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    Ok(match value {
        serde_json::Value::Null => py.None(),
        serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().unbind().into_any(),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.unbind().into_any()
            } else if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.unbind().into_any()
            } else {
                n.as_f64()
                    .ok_or_else(|| PyValueError::new_err("non-finite number"))?
                    .into_pyobject(py)?
                    .unbind()
                    .into_any()
            }
        }
        serde_json::Value::String(s) => s.as_str().into_pyobject(py)?.unbind().into_any(),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.unbind().into_any()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, json_to_py(py, v)?)?;
            }
            dict.unbind().into_any()
        }
    })
}

fn serialize_to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let doc = serde_json::to_value(value)
        .map_err(|e| PyValueError::new_err(format!("serialization failed: {e}")))?;
    json_to_py(py, &doc)
}

/// A complex n×2 matrix with orthonormal columns.
#[pyclass(name = "OrthoMatrix", frozen)]
struct PyOrthoMatrix {
    inner: OrthoMatrix,
}

#[pymethods]
impl PyOrthoMatrix {
    /// Builds from `n` rows of two complex numbers, validating
    /// orthonormality of the columns.
    #[staticmethod]
    fn from_rows(rows: Vec<(Complex64, Complex64)>) -> PyResult<Self> {
        let rows: Vec<[Complex64; 2]> = rows.into_iter().map(|(a, b)| [a, b]).collect();
        Ok(PyOrthoMatrix {
            inner: validate_ortho(&rows, TOL_ORTH).map_err(err)?,
        })
    }

    /// A seeded Haar-like random matrix.
    #[staticmethod]
    fn random(n: usize, seed: u64) -> PyResult<Self> {
        Ok(PyOrthoMatrix {
            inner: random_ortho(n, seed).map_err(err)?,
        })
    }

    /// The tetrahedral equality matrix, optionally rotated by a seeded
    /// random rotation. Requires 4 | n.
    #[staticmethod]
    #[pyo3(signature = (n, rotate_seed=None))]
    fn extremal(n: usize, rotate_seed: Option<u64>) -> PyResult<Self> {
        let cfg = tetrahedron_config(n, rotate_seed.map(random_rotation)).map_err(err)?;
        Ok(PyOrthoMatrix {
            inner: matrix_from_config(&cfg).map_err(err)?,
        })
    }

    /// Lifts a configuration of n vectors (closing up, total length 2)
    /// back to a matrix in the canonical gauge.
    #[staticmethod]
    fn from_config(w: Vec<(f64, f64, f64)>) -> PyResult<Self> {
        let w = w.into_iter().map(|(x, y, z)| [x, y, z]).collect();
        let cfg = RowConfig::new(w).map_err(err)?;
        Ok(PyOrthoMatrix {
            inner: matrix_from_config(&cfg).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn rows(&self) -> Vec<(Complex64, Complex64)> {
        self.inner.rows().iter().map(|r| (r[0], r[1])).collect()
    }

    /// The transferred configuration as a list of 3-vectors.
    fn config(&self) -> PyResult<Vec<(f64, f64, f64)>> {
        let cfg = config_from_matrix(&self.inner).map_err(err)?;
        Ok(cfg.vectors().iter().map(|w| (w[0], w[1], w[2])).collect())
    }

    /// The certified selection as a dict: pair, sigma2, invNorm, bound, path.
    fn select_certified(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let sel = select_certified(&self.inner).map_err(err)?;
        serialize_to_py(py, &sel)
    }

    /// Exhaustive best pair: returns (i, j, lambda2_max).
    fn best_pair(&self) -> (usize, usize, f64) {
        let res = brute_force_best_pair(&self.inner, false);
        (res.best_i, res.best_j, res.lambda2_max)
    }

    /// Max residual of |⟨u_i, u_j⟩|² = ½ r_i r_j + ½ (w_i, w_j).
    fn transfer_residual(&self) -> PyResult<f64> {
        transfer_identity_check(&self.inner).map_err(err)
    }

    /// The certificate of this matrix's configuration, as a dict.
    fn lemma_certificate(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let cfg = config_from_matrix(&self.inner).map_err(err)?;
        let dump = CertificateDump::from_certificate(&build_certificate(&cfg));
        serialize_to_py(py, &dump)
    }

    fn __repr__(&self) -> String {
        format!("OrthoMatrix(n={})", self.inner.n())
    }
}

/// The sharp constant 2 − 2/√3.
#[pyfunction]
fn alpha() -> f64 {
    subinv::alpha()
}

/// The guaranteed inverse-norm bound √(n/α).
#[pyfunction]
fn spectral_bound(n: usize) -> f64 {
    subinv::spectral_bound(n)
}

/// (u, v) ↦ (2 Re ūv, −2 Im ūv, |u|² − |v|²).
#[pyfunction]
fn hopf_map(u: Complex64, v: Complex64) -> PyResult<(f64, f64, f64)> {
    let w = subinv::hopf_map(u, v).map_err(err)?;
    Ok((w[0], w[1], w[2]))
}

/// The canonical-gauge preimage of a 3-vector under the map above.
#[pyfunction]
fn hopf_lift(w: (f64, f64, f64)) -> PyResult<(Complex64, Complex64)> {
    subinv::hopf_lift([w.0, w.1, w.2]).map_err(err)
}

/// |w_i| + |w_j| − |w_i + w_j|, evaluated without cancellation.
#[pyfunction]
fn gap(wi: (f64, f64, f64), wj: (f64, f64, f64)) -> f64 {
    subinv::polygon::gap([wi.0, wi.1, wi.2], [wj.0, wj.1, wj.2])
}

/// Checks the gap bound 2α/n on a closed polygon given by its edges.
#[pyfunction]
#[pyo3(signature = (edges, normalize=false))]
fn check_polygon(py: Python<'_>, edges: Vec<(f64, f64, f64)>, normalize: bool) -> PyResult<Py<PyAny>> {
    let edges: Vec<[f64; 3]> = edges.into_iter().map(|(x, y, z)| [x, y, z]).collect();
    let poly = if normalize {
        Polygon::from_edges_normalized(edges).map_err(err)?
    } else {
        Polygon::from_edges(edges).map_err(err)?
    };
    serialize_to_py(py, &check_corollary(&poly))
}

/// Scans `trials` random configurations for positive certificate minima.
/// Returns a dict with the violation count and the extreme minima seen.
#[pyfunction]
fn lemma_scan(py: Python<'_>, n: usize, trials: usize, seed: u64) -> PyResult<Py<PyAny>> {
    if trials == 0 {
        return Err(PyValueError::new_err("need at least one trial"));
    }
    let mut violations = 0usize;
    let mut min_of_min = f64::INFINITY;
    let mut max_of_min = f64::NEG_INFINITY;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64 + 1);
        let cfg = RowConfig::random_from_rng(n, &mut rng).map_err(err)?;
        let value = build_certificate(&cfg).min_entry.value;
        if value > subinv::certificate::TOL_M_ENTRY {
            violations += 1;
        }
        min_of_min = min_of_min.min(value);
        max_of_min = max_of_min.max(value);
    }
    let dict = PyDict::new(py);
    dict.set_item("n", n)?;
    dict.set_item("trials", trials)?;
    dict.set_item("seed", seed)?;
    dict.set_item("violations", violations)?;
    dict.set_item("minEntryMin", min_of_min)?;
    dict.set_item("minEntryMax", max_of_min)?;
    Ok(dict.unbind().into_any())
}

#[pymodule]
fn subinv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOrthoMatrix>()?;
    m.add_function(wrap_pyfunction!(alpha, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_bound, m)?)?;
    m.add_function(wrap_pyfunction!(hopf_map, m)?)?;
    m.add_function(wrap_pyfunction!(hopf_lift, m)?)?;
    m.add_function(wrap_pyfunction!(gap, m)?)?;
    m.add_function(wrap_pyfunction!(check_polygon, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_scan, m)?)?;
    Ok(())
}
