//! Python bindings: instance generation, learners, witness verification, and
//! the exact feasibility oracle. Rationals cross the boundary as "p/q"
//! strings so no precision is lost.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::str::FromStr;

use cqlearn::geometry::{LinearConcept, RationalVector, Sign};
use cqlearn::lab::{self, InstanceKind, WitnessKind};
use cqlearn::learn::{self, BoostConfig};
use cqlearn::lp::{self, ConstraintSystem, LinearForm};
use cqlearn::query::SimulatedOracle;
use cqlearn::Rat;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rat_to_string(r: &Rat) -> String {
    use num_traits::One;
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rat_from_string(s: &str) -> PyResult<Rat> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p = num_bigint::BigInt::from_str(p.trim()).map_err(err)?;
    let q = num_bigint::BigInt::from_str(q.trim()).map_err(err)?;
    if q == num_bigint::BigInt::from(0) {
        return Err(PyValueError::new_err("zero denominator"));
    }
    Ok(Rat::new(p, q))
}

fn vector_to_strings(v: &RationalVector) -> Vec<String> {
    v.coords().iter().map(rat_to_string).collect()
}

fn vector_from_strings(coords: Vec<String>) -> PyResult<RationalVector> {
    let parsed: PyResult<Vec<Rat>> = coords.iter().map(|s| rat_from_string(s)).collect();
    Ok(RationalVector::new(parsed?))
}

/// A pool of rational points with a hidden consistent half space.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Instance {
    inner: lab::Instance,
}

#[pymethods]
impl Instance {
    #[getter]
    fn pool(&self) -> Vec<Vec<String>> {
        self.inner.pool.iter().map(vector_to_strings).collect()
    }

    #[getter]
    fn hidden(&self) -> Vec<String> {
        vector_to_strings(self.inner.hidden.weights())
    }

    #[getter]
    fn suggested_k(&self) -> usize {
        self.inner.suggested_k
    }

    #[getter]
    fn kind(&self) -> String {
        match &self.inner.kind {
            InstanceKind::Grid { n_side, d } => format!("grid(N={n_side}, d={d})"),
            InstanceKind::Margin { eta } => format!("margin(eta={})", rat_to_string(eta)),
            InstanceKind::Custom => "custom".into(),
        }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.pool.len()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.pool[0].dim()
    }

    /// Exact labels of the full pool under the hidden concept (+1/-1).
    fn labels(&self) -> PyResult<Vec<i8>> {
        self.inner
            .pool
            .iter()
            .map(|x| {
                self.inner
                    .hidden
                    .label_of(x)
                    .map(|s| if s == Sign::Pos { 1 } else { -1 })
                    .map_err(err)
            })
            .collect()
    }

    fn to_text(&self) -> String {
        cqlearn::io::export_instance(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Instance(n={}, d={}, kind={})", self.n(), self.d(), self.kind())
    }
}

/// A pool plus n+1 concepts certifying an inference-dimension lower bound.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Witness {
    inner: lab::WitnessInstance,
}

#[pymethods]
impl Witness {
    #[getter]
    fn pool(&self) -> Vec<Vec<String>> {
        self.inner.pool.iter().map(vector_to_strings).collect()
    }

    #[getter]
    fn concepts(&self) -> Vec<Vec<String>> {
        self.inner
            .concepts
            .iter()
            .map(|c| vector_to_strings(c.weights()))
            .collect()
    }

    #[getter]
    fn kind(&self) -> String {
        match &self.inner.kind {
            WitnessKind::R3 { m } => format!("r3(M={m})"),
            WitnessKind::Margin => "margin".into(),
            WitnessKind::Custom => "custom".into(),
        }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn to_text(&self) -> String {
        cqlearn::io::export_witness(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Witness(n={}, kind={})", self.n(), self.kind())
    }
}

/// Uniform pool on the integer grid {0..N}^d with a random consistent
/// concept of bounded weights.
#[pyfunction]
fn gen_grid(n_side: u64, d: usize, n: usize, seed: u64) -> PyResult<Instance> {
    Ok(Instance { inner: lab::gen_grid(n_side, d, n, seed).map_err(err)? })
}

/// Pool with exact minimal ratio at least `eta` (a "p/q" string).
#[pyfunction]
fn gen_margin(d: usize, n: usize, eta: &str, seed: u64) -> PyResult<Instance> {
    let eta = rat_from_string(eta)?;
    Ok(Instance { inner: lab::gen_margin(d, n, &eta, seed).map_err(err)? })
}

/// Certified lower-bound witness in R^3.
#[pyfunction]
fn gen_lb_r3(n: usize) -> PyResult<Witness> {
    Ok(Witness { inner: lab::gen_lb_r3(n).map_err(err)? })
}

/// Certified lower-bound witness with squared normalized margin >= 1/64.
#[pyfunction]
fn gen_lb_margin(n: usize) -> PyResult<Witness> {
    Ok(Witness { inner: lab::gen_lb_margin(n).map_err(err)? })
}

/// Checks the witness conditions; returns {"clean", "violations",
/// "min_margin_sq"}.
#[pyfunction]
fn verify_witness<'py>(py: Python<'py>, w: &Witness) -> PyResult<Bound<'py, PyDict>> {
    let report = lab::verify_witness(&w.inner).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("clean", report.clean())?;
    out.set_item("violations", report.violations.clone())?;
    out.set_item(
        "min_margin_sq",
        report.min_margin_sq.as_ref().map(rat_to_string),
    )?;
    Ok(out)
}

/// Parses the instance/witness text format; returns an Instance or Witness.
#[pyfunction]
fn parse_text(py: Python<'_>, text: &str) -> PyResult<Py<pyo3::types::PyAny>> {
    match cqlearn::io::parse_instance_text(text).map_err(err)? {
        cqlearn::io::ParsedFile::Instance(inner) => {
            Ok(Instance { inner }.into_pyobject(py)?.into_any().unbind())
        }
        cqlearn::io::ParsedFile::Witness(inner) => {
            Ok(Witness { inner }.into_pyobject(py)?.into_any().unbind())
        }
    }
}

fn report_dict<'py>(
    py: Python<'py>,
    oracle: &SimulatedOracle,
    report: &learn::RunReport,
) -> PyResult<Bound<'py, PyDict>> {
    let violations = report
        .labels
        .iter()
        .filter(|(&id, &s)| s != oracle.hidden().label_of(&oracle.pool()[id]).unwrap())
        .count();
    let labels: std::collections::BTreeMap<usize, i8> = report
        .labels
        .iter()
        .map(|(&id, &s)| (id, if s == Sign::Pos { 1 } else { -1 }))
        .collect();
    let out = PyDict::new(py);
    out.set_item("labels", labels)?;
    out.set_item("label_queries", oracle.stats().label_count)?;
    out.set_item("compare_queries", oracle.stats().compare_count)?;
    out.set_item("total_queries", oracle.stats().total())?;
    out.set_item("iterations", report.iterations)?;
    out.set_item("resamples", report.resamples)?;
    out.set_item("dis_trajectory", report.dis_trajectory.clone())?;
    out.set_item("soundness_violations", violations)?;
    Ok(out)
}

/// Planar learner (2D, or 3D pools with last coordinate 1).
#[pyfunction]
fn run_learn2d<'py>(py: Python<'py>, inst: &Instance, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let mut oracle =
        SimulatedOracle::new(inst.inner.hidden.clone(), inst.inner.pool.clone()).map_err(err)?;
    let report = learn::learn_2d(&mut oracle, 30, seed).map_err(err)?;
    report_dict(py, &oracle, &report)
}

/// Boosting learner; labels the whole pool. `k` defaults to the instance's
/// suggested value.
#[pyfunction]
#[pyo3(signature = (inst, seed, k=None))]
fn run_boost<'py>(
    py: Python<'py>,
    inst: &Instance,
    seed: u64,
    k: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let mut oracle =
        SimulatedOracle::new(inst.inner.hidden.clone(), inst.inner.pool.clone()).map_err(err)?;
    let cfg = BoostConfig::new(k.unwrap_or(inst.inner.suggested_k), seed);
    let report = learn::boost(&mut oracle, &cfg).map_err(err)?;
    report_dict(py, &oracle, &report)
}

/// Exact feasibility of {nonstrict . w >= 0, strict . w > 0}; returns a
/// rational witness as "p/q" strings, or None when infeasible.
#[pyfunction]
fn feasible(
    d: usize,
    nonstrict: Vec<Vec<String>>,
    strict: Vec<Vec<String>>,
) -> PyResult<Option<Vec<String>>> {
    let mut sys = ConstraintSystem::new(d);
    for row in nonstrict {
        sys.push_nonstrict(LinearForm::new(vector_from_strings(row)?));
    }
    for row in strict {
        sys.push_strict(LinearForm::new(vector_from_strings(row)?));
    }
    match lp::feasible(&sys).map_err(err)? {
        lp::Feasibility::Feasible(w) => Ok(Some(vector_to_strings(&w))),
        lp::Feasibility::Infeasible => Ok(None),
    }
}

/// Exact margin diagnostics of a concept over a pool; returns
/// {"gamma_over_rho_sq", "eta", "max_norm_sq"} as "p/q" strings.
#[pyfunction]
fn margin_report<'py>(
    py: Python<'py>,
    weights: Vec<String>,
    pool: Vec<Vec<String>>,
) -> PyResult<Bound<'py, PyDict>> {
    let concept = LinearConcept::new(vector_from_strings(weights)?);
    let points: PyResult<Vec<RationalVector>> =
        pool.into_iter().map(vector_from_strings).collect();
    let r = cqlearn::geometry::margin_report(&concept, &points?).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("gamma_over_rho_sq", rat_to_string(&r.gamma_over_rho_sq))?;
    out.set_item("eta", rat_to_string(&r.eta))?;
    out.set_item("max_norm_sq", rat_to_string(&r.max_norm_sq))?;
    Ok(out)
}

/// Sign of <w, x> under the f(x) >= 0 => +1 convention.
#[pyfunction]
fn label_of(weights: Vec<String>, point: Vec<String>) -> PyResult<i8> {
    let concept = LinearConcept::new(vector_from_strings(weights)?);
    let x = vector_from_strings(point)?;
    concept
        .label_of(&x)
        .map(|s| if s == Sign::Pos { 1 } else { -1 })
        .map_err(err)
}

#[pymodule]
fn cqlearn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Instance>()?;
    m.add_class::<Witness>()?;
    m.add_function(wrap_pyfunction!(gen_grid, m)?)?;
    m.add_function(wrap_pyfunction!(gen_margin, m)?)?;
    m.add_function(wrap_pyfunction!(gen_lb_r3, m)?)?;
    m.add_function(wrap_pyfunction!(gen_lb_margin, m)?)?;
    m.add_function(wrap_pyfunction!(verify_witness, m)?)?;
    m.add_function(wrap_pyfunction!(parse_text, m)?)?;
    m.add_function(wrap_pyfunction!(run_learn2d, m)?)?;
    m.add_function(wrap_pyfunction!(run_boost, m)?)?;
    m.add_function(wrap_pyfunction!(feasible, m)?)?;
    m.add_function(wrap_pyfunction!(margin_report, m)?)?;
    m.add_function(wrap_pyfunction!(label_of, m)?)?;
    Ok(())
}
