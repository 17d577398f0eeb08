//! Python bindings: the main exact types (scalars, Lie algebras, compact
//! group specs) and the simulator entry points, mirroring the CLI verbs.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use compel::compact::CompactGroupSpec;
use compel::files;
use compel::lattice;
use compel::lie;
use compel::scalar::{self, AlgebraicScalar};
use compel::sim::{self, SimConfig, SimSpec};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any()
            }
        }
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let converted: Vec<Bound<'py, PyAny>> = items
                .iter()
                .map(|x| json_to_py(py, x))
                .collect::<PyResult<_>>()?;
            PyList::new(py, converted)?.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, val) in map {
                dict.set_item(k, json_to_py(py, val)?)?;
            }
            dict.into_any()
        }
    })
}

/// Exact unit-circle scalar: a Gaussian rational literal like "3/5+4/5*i",
/// or a JSON object {"minpoly": [...], "root_box": [...]}.
#[pyclass(frozen)]
struct Scalar {
    inner: AlgebraicScalar,
}

#[pymethods]
impl Scalar {
    #[new]
    fn new(literal: &str) -> PyResult<Self> {
        let inner = scalar::parse_scalar(literal).map_err(err)?;
        inner.validate().map_err(err)?;
        Ok(Scalar { inner })
    }

    fn minpoly(&self) -> String {
        self.inner.minpoly().to_display_string()
    }

    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn is_algebraic_integer(&self) -> bool {
        scalar::is_algebraic_integer(&self.inner)
    }

    fn unit_modulus(&self) -> bool {
        scalar::unit_modulus(&self.inner)
    }

    fn is_root_of_unity(&self) -> PyResult<bool> {
        scalar::is_root_of_unity(&self.inner).map_err(err)
    }

    /// Finite-generation verdict for the derived module Σ ℤ(1 − zⁿ).
    fn fg(&self) -> PyResult<bool> {
        lattice::fg_derived_criterion(&self.inner).map_err(err)
    }

    /// Hermite chain report up to the bound, as a dict.
    #[pyo3(signature = (bound = 12))]
    fn chain<'py>(&self, py: Python<'py>, bound: usize) -> PyResult<Bound<'py, PyAny>> {
        let comp = lattice::derived_module_chain(&self.inner, bound).map_err(err)?;
        json_to_py(py, &files::chain_report_to_json(&comp.report))
    }

    fn __repr__(&self) -> String {
        match &self.inner {
            AlgebraicScalar::Gaussian(g) => format!("Scalar(\"{}\")", g.to_literal()),
            AlgebraicScalar::Abstract { minpoly, .. } => {
                format!("Scalar(minpoly = {})", minpoly.to_display_string())
            }
        }
    }
}

/// Lie algebra over ℚ given by rational structure constants, loaded from the
/// JSON file format.
#[pyclass(frozen)]
struct LieAlgebra {
    inner: lie::LieAlgebra,
}

#[pymethods]
impl LieAlgebra {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = files::parse_algebra_str(text, std::path::Path::new("<inline>"))
            .map_err(err)?;
        inner.validate().map_err(err)?;
        Ok(LieAlgebra { inner })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let inner = files::load_algebra(std::path::Path::new(path)).map_err(err)?;
        inner.validate().map_err(err)?;
        Ok(LieAlgebra { inner })
    }

    fn dim(&self) -> usize {
        self.inner.dim
    }

    fn is_solvable(&self) -> bool {
        self.inner.is_solvable()
    }

    fn is_nilpotent(&self) -> bool {
        self.inner.is_nilpotent()
    }

    fn derived_series_dims(&self) -> Vec<usize> {
        self.inner.derived_series().iter().map(|t| t.rank()).collect()
    }

    fn lower_central_series_dims(&self) -> Vec<usize> {
        self.inner.lower_central_series().iter().map(|t| t.rank()).collect()
    }

    /// Solvable-quotient classifier verdict and its ingredients.
    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let report = self.inner.classify();
        json_to_py(
            py,
            &serde_json::json!({
                "verdict": report.verdict,
                "perfect_core_dim": report.perfect_core.rank(),
                "quotient_nilpotent": report.quotient_nilpotent,
            }),
        )
    }

    fn __repr__(&self) -> String {
        format!("LieAlgebra(dim = {})", self.inner.dim)
    }
}

/// Compact group K (finite extension of a torus) acting on a weight-line
/// decomposition, loaded from the JSON spec format.
#[pyclass(frozen)]
struct GroupSpec {
    inner: CompactGroupSpec,
}

#[pymethods]
impl GroupSpec {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = files::parse_group_spec_str(text, std::path::Path::new("<inline>"))
            .map_err(err)?;
        inner.validate().map_err(err)?;
        Ok(GroupSpec { inner })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let inner = files::load_group_spec(std::path::Path::new(path)).map_err(err)?;
        inner.validate().map_err(err)?;
        Ok(GroupSpec { inner })
    }

    fn warnings(&self) -> PyResult<Vec<String>> {
        self.inner.validate().map_err(err)
    }

    fn almost_elliptic(&self) -> bool {
        self.inner.almost_elliptic()
    }

    fn cond_c<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let map: serde_json::Value = serde_json::to_value(self.inner.cond_c_check()).map_err(err)?;
        json_to_py(py, &map)
    }

    fn cond_d<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let map: serde_json::Value = serde_json::to_value(self.inner.cond_d_check()).map_err(err)?;
        json_to_py(py, &map)
    }

    fn audit<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let audit = self.inner.equivalence_audit();
        let per: serde_json::Map<String, serde_json::Value> = audit
            .per_component
            .iter()
            .map(|(label, c, d)| {
                (label.clone(), serde_json::json!({"condition_c": c, "condition_d": d}))
            })
            .collect();
        json_to_py(
            py,
            &serde_json::json!({
                "per_component": per,
                "disagreements": audit.disagreements,
                "agree": audit.disagreements.is_empty(),
            }),
        )
    }

    fn reduce(&self, component: &str) -> PyResult<GroupSpec> {
        let inner = self.inner.monothetic_reduction(component).map_err(err)?;
        Ok(GroupSpec { inner })
    }

    fn component_labels(&self) -> Vec<String> {
        self.inner.components.iter().map(|c| c.label.clone()).collect()
    }

    /// Per-coset symbolic determinant over the full torus, rendered as text.
    fn generic_det(&self, component: &str) -> PyResult<String> {
        let det = self
            .inner
            .generic_det(component, &self.inner.full_torus_basis())
            .map_err(err)?;
        Ok(det.to_string())
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&files::spec_to_json(&self.inner)).expect("serializes")
    }

    /// Sampled ellipticity scan of the numeric model.
    #[pyo3(signature = (samples = 200, delta = 0.1, seed = 0))]
    fn empirical_ellipticity<'py>(
        &self,
        py: Python<'py>,
        samples: usize,
        delta: f64,
        seed: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let sim_spec = SimSpec::from_spec(&self.inner).map_err(err)?;
        let config = SimConfig { samples, delta, seed, ..Default::default() };
        let report = sim_spec.empirical_ellipticity(&config).map_err(err)?;
        json_to_py(
            py,
            &serde_json::json!({
                "verdict": report.verdict,
                "max_distance": report.max_distance,
                "witness_component": report.witness_component,
                "samples": report.samples,
                "seed": report.seed,
            }),
        )
    }

    fn __repr__(&self) -> String {
        format!(
            "GroupSpec(rank = {}, weights = {}, components = {})",
            self.inner.weights.torus_rank,
            self.inner.weights.weights.len(),
            self.inner.components.len()
        )
    }
}

/// Maximum circular gap between consecutive points of {nθ mod 1 : 1 ≤ n ≤ N}.
#[pyfunction]
fn orbit_gap(theta: f64, n: usize) -> f64 {
    sim::orbit_gap(theta, n)
}

/// Integer-relation rank estimate for {v − zⁿv : n ∈ exponents}.
#[pyfunction]
#[pyo3(signature = (z_re, z_im, exponents, v_re = 1.0, v_im = 0.0))]
fn fg_witness<'py>(
    py: Python<'py>,
    z_re: f64,
    z_im: f64,
    exponents: Vec<i64>,
    v_re: f64,
    v_im: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let report = sim::fg_dense_witness(
        Complex64::new(z_re, z_im),
        Complex64::new(v_re, v_im),
        &exponents,
    )
    .map_err(err)?;
    json_to_py(
        py,
        &serde_json::json!({
            "q_rank_estimate": report.q_rank_estimate,
            "discrete": report.discrete,
            "invariant_line": report.invariant_line,
            "relations_found": report.relations_found,
        }),
    )
}

#[pymodule]
fn compel_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Scalar>()?;
    m.add_class::<LieAlgebra>()?;
    m.add_class::<GroupSpec>()?;
    m.add_function(wrap_pyfunction!(orbit_gap, m)?)?;
    m.add_function(wrap_pyfunction!(fg_witness, m)?)?;
    Ok(())
}
