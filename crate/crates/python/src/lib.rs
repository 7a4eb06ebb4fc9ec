//! Python bindings.
//!
//! Extents and offsets are accepted as anything whose `str()` parses as a
//! rational (`int`, `fractions.Fraction`, `"3/4"`). Structured results are
//! returned as plain dicts with the same layout as the command-line JSON.

use pyo3::exceptions::{PyTimeoutError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyList;
use serde::Serialize;

use ::brickbox as core;
use core::counterexample::{make_instance, pinwheel_tiling, Verdict};
use core::exact_cover::{SolverConfig, TileOutcome, DEFAULT_GRID_CAP, DEFAULT_NODE_BUDGET};
use core::geometry::{BoxSpec, Brick};
use core::rational::Rational;
use core::spectral::Frequency;
use core::theorem::KeyObservation;

fn value_error(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rationals(items: &Bound<'_, PyAny>) -> PyResult<Vec<Rational>> {
    items
        .try_iter()?
        .map(|item| {
            let s = item?.str()?.to_string();
            s.trim().parse::<Rational>().map_err(value_error)
        })
        .collect()
}

fn box_spec(dims: &Bound<'_, PyAny>) -> PyResult<BoxSpec> {
    BoxSpec::new(rationals(dims)?).map_err(value_error)
}

fn brick(dims: &Bound<'_, PyAny>) -> PyResult<Brick> {
    Brick::new(rationals(dims)?).map_err(value_error)
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A box together with brick types and placed translates.
#[pyclass(module = "brickbox", frozen)]
struct Tiling {
    inner: core::Tiling,
}

#[pymethods]
impl Tiling {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Tiling { inner })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("tilings serialize")
    }

    #[getter]
    fn ndim(&self) -> usize {
        self.inner.ndim()
    }

    fn __len__(&self) -> usize {
        self.inner.placements().len()
    }

    /// Geometric check; returns `{"status": "ok"}` or a description of the failure.
    fn verify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &core::verify_tiling_geometric(&self.inner))
    }

    /// Residual of the Fourier-side tiling identity at random frequencies.
    #[pyo3(signature = (samples = 1000, seed = 42))]
    fn spectral_check<'py>(&self, py: Python<'py>, samples: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &core::spectral::spectral_check(&self.inner, samples, seed).map_err(value_error)?)
    }

    fn residual_at(&self, xi: Vec<f64>) -> PyResult<f64> {
        core::spectral::residual_at_point(&self.inner, &Frequency(xi)).map_err(value_error)
    }

    fn render_svg(&self) -> PyResult<String> {
        core::svg::render_svg(&self.inner).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!(
            "Tiling(box={:?}, bricks={}, placements={})",
            self.inner.box_spec().dims().iter().map(ToString::to_string).collect::<Vec<_>>(),
            self.inner.bricks().len(),
            self.inner.placements().len()
        )
    }
}

#[pyfunction]
fn decide_two_brick<'py>(
    py: Python<'py>,
    box_dims: &Bound<'py, PyAny>,
    a: &Bound<'py, PyAny>,
    b: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyAny>> {
    let outcome = core::decide_two_brick(&box_spec(box_dims)?, &brick(a)?, &brick(b)?).map_err(value_error)?;
    to_py(py, &outcome)
}

#[pyfunction]
fn find_split<'py>(
    py: Python<'py>,
    box_dims: &Bound<'py, PyAny>,
    a: &Bound<'py, PyAny>,
    b: &Bound<'py, PyAny>,
) -> PyResult<Option<Bound<'py, PyAny>>> {
    core::find_split(&box_spec(box_dims)?, &brick(a)?, &brick(b)?)
        .map_err(value_error)?
        .map(|cert| to_py(py, &cert))
        .transpose()
}

#[pyfunction]
fn one_brick_tileable(box_dims: &Bound<'_, PyAny>, a: &Bound<'_, PyAny>) -> PyResult<bool> {
    core::theorem::one_brick_tileable(&box_spec(box_dims)?, &brick(a)?).map_err(value_error)
}

/// `None` when the divisibility condition holds, else the first violating 1-based axis pair.
#[pyfunction]
fn key_observation_holds(
    box_dims: &Bound<'_, PyAny>,
    a: &Bound<'_, PyAny>,
    b: &Bound<'_, PyAny>,
) -> PyResult<Option<(usize, usize)>> {
    match core::theorem::key_observation_holds(&box_spec(box_dims)?, &brick(a)?, &brick(b)?).map_err(value_error)? {
        KeyObservation::Holds => Ok(None),
        KeyObservation::Violation { i, j } => Ok(Some((i + 1, j + 1))),
    }
}

#[pyfunction]
fn solve_axis_combination(
    length: &Bound<'_, PyAny>,
    a: &Bound<'_, PyAny>,
    b: &Bound<'_, PyAny>,
) -> PyResult<Vec<(u64, u64)>> {
    let parse = |x: &Bound<'_, PyAny>| x.str()?.to_string().trim().parse::<Rational>().map_err(value_error);
    Ok(core::theorem::solve_axis_combination(&parse(length)?, &parse(a)?, &parse(b)?))
}

/// Explicit tiling: the split construction for one or two bricks, exact cover
/// otherwise or when `oracle` is set. Returns `None` when untileable.
#[pyfunction]
#[pyo3(signature = (box_dims, bricks, oracle = false, grid_cap = DEFAULT_GRID_CAP, node_budget = DEFAULT_NODE_BUDGET))]
fn tile(
    box_dims: &Bound<'_, PyAny>,
    bricks: &Bound<'_, PyList>,
    oracle: bool,
    grid_cap: u64,
    node_budget: u64,
) -> PyResult<Option<Tiling>> {
    let boxed = box_spec(box_dims)?;
    let bricks = bricks.iter().map(|b| brick(&b)).collect::<PyResult<Vec<_>>>()?;
    let found = match bricks.as_slice() {
        [a] if !oracle => core::theorem::single_brick_tiling(&boxed, a).map_err(value_error)?,
        [a, b] if !oracle => match core::find_split(&boxed, a, b).map_err(value_error)? {
            Some(cert) => Some(core::theorem::certificate_to_tiling(&cert, &boxed, a, b).map_err(value_error)?),
            None => None,
        },
        _ => match core::exact_cover_tileable(&boxed, &bricks, &SolverConfig { grid_cap, node_budget })
            .map_err(value_error)?
        {
            TileOutcome::Tiling(t) => Some(t),
            TileOutcome::Unsat => None,
            TileOutcome::Timeout { nodes } => {
                return Err(PyTimeoutError::new_err(format!("search budget exhausted after {nodes} nodes")))
            }
        },
    };
    Ok(found.map(|inner| Tiling { inner }))
}

#[pyfunction]
fn box_transform(dims: &Bound<'_, PyAny>, xi: Vec<f64>) -> PyResult<f64> {
    let dims = rationals(dims)?;
    if dims.len() != xi.len() {
        return Err(PyValueError::new_err("dims and xi differ in length"));
    }
    Ok(core::spectral::box_transform(&dims, &Frequency(xi)))
}

/// Exact membership of a rational frequency in the zero set of the box transform.
#[pyfunction]
fn in_zero_set(xi: &Bound<'_, PyAny>, box_dims: &Bound<'_, PyAny>) -> PyResult<bool> {
    let xi = rationals(xi)?;
    let boxed = box_spec(box_dims)?;
    if xi.len() != boxed.ndim() {
        return Err(PyValueError::new_err("xi and box differ in dimension"));
    }
    Ok(core::spectral::in_zero_set_exact(&xi, &boxed))
}

#[pyfunction]
fn pinwheel(r: u64) -> PyResult<Tiling> {
    let inst = make_instance(r).map_err(value_error)?;
    Ok(Tiling { inner: pinwheel_tiling(&inst) })
}

/// Returns `{"verdict": "no_split" | "split_found" | "undecided", "entries": [...]}`.
#[pyfunction]
#[pyo3(signature = (r, grid_cap = DEFAULT_GRID_CAP, node_budget = DEFAULT_NODE_BUDGET))]
fn verify_no_proper_split<'py>(
    py: Python<'py>,
    r: u64,
    grid_cap: u64,
    node_budget: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let inst = make_instance(r).map_err(value_error)?;
    let report = core::counterexample::verify_no_proper_split(&inst, &SolverConfig { grid_cap, node_budget })
        .map_err(value_error)?;
    let verdict = match report.verdict() {
        Verdict::NoSplit => "no_split",
        Verdict::SplitFound(_) => "split_found",
        Verdict::Undecided { .. } => "undecided",
    };
    to_py(py, &serde_json::json!({ "verdict": verdict, "entries": report }))
}

#[pyfunction]
fn rational_gcd(x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>) -> PyResult<String> {
    let parse = |v: &Bound<'_, PyAny>| v.str()?.to_string().trim().parse::<Rational>().map_err(value_error);
    Ok(core::rational::rational_gcd(&parse(x)?, &parse(y)?).map_err(value_error)?.to_string())
}

#[pymodule]
fn brickbox(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Tiling>()?;
    m.add_function(wrap_pyfunction!(decide_two_brick, m)?)?;
    m.add_function(wrap_pyfunction!(find_split, m)?)?;
    m.add_function(wrap_pyfunction!(one_brick_tileable, m)?)?;
    m.add_function(wrap_pyfunction!(key_observation_holds, m)?)?;
    m.add_function(wrap_pyfunction!(solve_axis_combination, m)?)?;
    m.add_function(wrap_pyfunction!(tile, m)?)?;
    m.add_function(wrap_pyfunction!(box_transform, m)?)?;
    m.add_function(wrap_pyfunction!(in_zero_set, m)?)?;
    m.add_function(wrap_pyfunction!(pinwheel, m)?)?;
    m.add_function(wrap_pyfunction!(verify_no_proper_split, m)?)?;
    m.add_function(wrap_pyfunction!(rational_gcd, m)?)?;
    Ok(())
}
