//! Python bindings for the josephus workbench: the circle zipper, the five
//! solvers, equivalence verification, diagrams, and the literate pipeline.
//!
//! Build with `cargo build -p josephus-py --release`, then import the
//! produced cdylib as `josephus_py` (see python/smoke_test.py).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use josephus::circle as circle_mod;
use josephus::dot::{paired_diagram, single_diagram, DiagramOptions};
use josephus::dynamics::{
    self, circle_system, imperative_system, system_map, verify_canonical, Reading,
};
use josephus::literate;
use josephus::solvers::{self, Problem};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn problem(n: u64, m: u64) -> PyResult<Problem> {
    Problem::new(n, m).map_err(value_error)
}

/// A nonempty circular arrangement of distinct labels with one focused
/// element. Operations are pure: `next` and `remove` return new circles.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Circle {
    inner: circle_mod::Circle<u64>,
}

#[pymethods]
impl Circle {
    #[new]
    #[pyo3(signature = (focus, after=Vec::new()))]
    fn new(focus: u64, after: Vec<u64>) -> PyResult<Self> {
        circle_mod::mk_circle(focus, after)
            .map(|inner| Circle { inner })
            .map_err(value_error)
    }

    /// The element currently in focus.
    fn current(&self) -> u64 {
        *self.inner.current()
    }

    fn is_singleton(&self) -> bool {
        self.inner.is_singleton()
    }

    fn size(&self) -> usize {
        self.inner.size()
    }

    /// Labels in circle order, starting at the focus.
    fn labels(&self) -> Vec<u64> {
        self.inner.iter().copied().collect()
    }

    /// The circle rotated one position forward.
    fn next(&self) -> Circle {
        Circle { inner: self.inner.clone().next() }
    }

    /// The circle with the focused element removed.
    fn remove(&self) -> Circle {
        Circle { inner: self.inner.clone().remove() }
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable")
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }

    fn __repr__(&self) -> String {
        self.inner.to_string()
    }

    fn __eq__(&self, other: &Circle) -> bool {
        self.inner == other.inner
    }
}

/// Elimination record: kill order plus survivor.
#[pyclass(frozen)]
struct KillSequence {
    inner: solvers::KillSequence,
}

#[pymethods]
impl KillSequence {
    #[getter]
    fn n(&self) -> u64 {
        self.inner.n
    }

    #[getter]
    fn m(&self) -> u64 {
        self.inner.m
    }

    #[getter]
    fn order(&self) -> Vec<u64> {
        self.inner.order.clone()
    }

    #[getter]
    fn survivor(&self) -> u64 {
        self.inner.survivor
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable")
    }

    /// CSV trace: `step,killed,remaining_count`, one row per kill.
    fn csv(&self) -> String {
        self.inner.csv()
    }

    fn __repr__(&self) -> String {
        format!(
            "KillSequence(n={}, m={}, survivor={})",
            self.inner.n, self.inner.m, self.inner.survivor
        )
    }
}

/// Rotates `m - 1` positions forward and removes the focus; returns the
/// removed label and the shrunk circle.
#[pyfunction]
fn remove_nth(m: u64, circle: &Circle) -> PyResult<(u64, Circle)> {
    if m < 1 {
        return Err(value_error("kill step must be at least 1"));
    }
    let (killed, rest) = solvers::remove_nth(m, circle.inner.clone());
    Ok((killed, Circle { inner: rest }))
}

/// Replays the cursor-and-list algorithm.
#[pyfunction]
fn simulate_imperative(n: u64, m: u64) -> PyResult<KillSequence> {
    Ok(KillSequence { inner: solvers::simulate_imperative(&problem(n, m)?) })
}

/// Drives the circle zipper until one player remains.
#[pyfunction]
fn solve_zipper(n: u64, m: u64) -> PyResult<KillSequence> {
    Ok(KillSequence { inner: solvers::solve_zipper(&problem(n, m)?) })
}

/// Full elimination order in O(n log n) via rank selection.
#[pyfunction]
fn solve_order_statistic(n: u64, m: u64) -> PyResult<KillSequence> {
    Ok(KillSequence { inner: solvers::solve_order_statistic(&problem(n, m)?) })
}

/// Survivor only, O(n) time and O(1) space.
#[pyfunction]
fn solve_recurrence(n: u64, m: u64) -> PyResult<u64> {
    Ok(solvers::solve_recurrence(&problem(n, m)?))
}

/// Survivor for kill step 2 in closed form.
#[pyfunction]
fn closed_form_m2(n: u64) -> PyResult<u64> {
    if n < 1 {
        return Err(value_error("player count must be at least 1"));
    }
    Ok(solvers::closed_form_m2(n))
}

/// The cursor-and-list snapshot equivalent to a circle, as
/// `(index, prisoners)`.
#[pyfunction]
#[pyo3(signature = (circle, m=3))]
fn canonical_map(circle: &Circle, m: u64) -> PyResult<(usize, Vec<u64>)> {
    if m < 1 {
        return Err(value_error("kill step must be at least 1"));
    }
    let state = dynamics::canonical_map(&circle.inner, m);
    Ok((state.index(), state.prisoners().to_vec()))
}

fn json_to_py<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match value {
        serde_json::Value::Null => py.None().into_bound(py),
        serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any()
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any()
            }
        }
        serde_json::Value::String(s) => s.into_pyobject(py)?.into_any(),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (key, item) in map {
                dict.set_item(key, json_to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

/// Exhaustively verifies the canonical map over labels `1..=universe`;
/// returns a dict with keys `morphism`, `isomorphism`, `counterexample`,
/// and `states_checked`. `reading` is `"killstep"` or `"line6"`.
#[pyfunction]
#[pyo3(signature = (universe=6, m=3, reading="killstep"))]
fn verify(py: Python<'_>, universe: u64, m: u64, reading: &str) -> PyResult<Py<PyAny>> {
    let reading = match reading {
        "killstep" => Reading::KillStep,
        "line6" => Reading::Line6Next,
        other => {
            return Err(value_error(format!(
                "reading must be \"killstep\" or \"line6\", not {other:?}"
            )))
        }
    };
    if universe < 1 || m < 1 {
        return Err(value_error("universe and kill step must be at least 1"));
    }
    let labels: Vec<u64> = (1..=universe).collect();
    let report = verify_canonical(&labels, m, reading, false).map_err(value_error)?;
    let value = serde_json::to_value(&report).expect("serializable");
    Ok(json_to_py(py, &value)?.unbind())
}

/// DOT diagram of the circle system over labels `1..=universe`; with
/// `with_map=True`, both systems plus dashed map edges.
#[pyfunction]
#[pyo3(signature = (universe=2, m=3, with_map=true, cap=200))]
fn diagram(universe: u64, m: u64, with_map: bool, cap: usize) -> PyResult<String> {
    if universe < 1 || m < 1 {
        return Err(value_error("universe and kill step must be at least 1"));
    }
    let labels: Vec<u64> = (1..=universe).collect();
    let opts = DiagramOptions { cap };
    if with_map {
        let map = system_map(
            circle_system(&labels, m).map_err(value_error)?,
            imperative_system(&labels, m).map_err(value_error)?,
            |c| dynamics::canonical_map(c, m),
        )
        .map_err(value_error)?;
        paired_diagram(&map, "H", "P", &opts).map_err(value_error)
    } else {
        let system = circle_system(&labels, m).map_err(value_error)?;
        single_diagram(&system, "H", &opts).map_err(value_error)
    }
}

/// Splices the chunk graph rooted at `root` into source text.
#[pyfunction]
fn tangle(source: &str, root: &str) -> PyResult<String> {
    let doc = literate::parse(source).map_err(value_error)?;
    literate::tangle(&doc, root).map_err(value_error)
}

/// Renders a literate document as markdown notes with an index.
#[pyfunction]
fn weave(source: &str) -> PyResult<String> {
    let doc = literate::parse(source).map_err(value_error)?;
    Ok(literate::weave(&doc))
}

/// Chunk table: `(ordinal, name, definition_lines, reference_sites)` per
/// chunk, where each reference site is `(chunk_name, line)`.
#[pyfunction]
fn list_chunks(source: &str) -> PyResult<Vec<(usize, String, Vec<usize>, Vec<(String, usize)>)>> {
    let doc = literate::parse(source).map_err(value_error)?;
    Ok(literate::list_chunks(&doc)
        .into_iter()
        .map(|row| {
            let refs = row
                .references
                .into_iter()
                .map(|site| (site.chunk, site.line))
                .collect();
            (row.ordinal, row.name, row.defined_at, refs)
        })
        .collect())
}

#[pymodule]
fn josephus_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Circle>()?;
    m.add_class::<KillSequence>()?;
    m.add_function(wrap_pyfunction!(remove_nth, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_imperative, m)?)?;
    m.add_function(wrap_pyfunction!(solve_zipper, m)?)?;
    m.add_function(wrap_pyfunction!(solve_order_statistic, m)?)?;
    m.add_function(wrap_pyfunction!(solve_recurrence, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_m2, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_map, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(diagram, m)?)?;
    m.add_function(wrap_pyfunction!(tangle, m)?)?;
    m.add_function(wrap_pyfunction!(weave, m)?)?;
    m.add_function(wrap_pyfunction!(list_chunks, m)?)?;
    Ok(())
}
