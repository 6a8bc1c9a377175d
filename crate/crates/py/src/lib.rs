//! Python bindings for the colored-partitions crate.
//!
//! Partitions cross the boundary as lists of part strings (`"5[b]"`,
//! `"4[a1a4]"`); structured results (traces, bridge reports, forests,
//! count reports) cross as JSON strings in the same wire format the CLI
//! emits, so one set of schemas covers both front ends.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use colored_partitions::bridge::{bridge_report, E1Route};
use colored_partitions::machine::{phi, psi};
use colored_partitions::motzkin::{dot_export, forest, motzkin_word, theta};
use colored_partitions::partition::{
    enumerate_e, enumerate_e2, enumerate_o, Ground,
};
use colored_partitions::pattern::{
    detect_family, find_shortcuts, has_double_special_pivot, mine_optimal, symbolic_of,
};
use colored_partitions::series::{
    corollary12_first_kind, corollary12_second_kind, full_report, specialize_12,
};
use colored_partitions::{ColoredPart, Error, Partition as CorePartition};

fn to_py(e: Error) -> PyErr {
    if e.is_input() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn json_of<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// A colored partition: parts `size[color]` in partition order.
#[pyclass(name = "Partition", from_py_object)]
#[derive(Clone)]
struct PyPartition {
    inner: CorePartition,
}

impl PyPartition {
    fn wrap(inner: CorePartition) -> PyPartition {
        PyPartition { inner }
    }
}

#[pymethods]
impl PyPartition {
    /// Builds a partition from part strings like `["5[b]", "4[a1a4]"]`.
    #[new]
    fn new(parts: Vec<String>) -> PyResult<Self> {
        let parts = parts
            .iter()
            .map(|s| ColoredPart::parse(s))
            .collect::<colored_partitions::Result<Vec<_>>>()
            .map_err(to_py)?;
        let inner = CorePartition::new(parts);
        inner.validate().map_err(to_py)?;
        Ok(PyPartition::wrap(inner))
    }

    /// The parts as display strings.
    fn parts(&self) -> Vec<String> {
        self.inner.parts.iter().map(ToString::to_string).collect()
    }

    /// Total size of the partition.
    fn size(&self) -> u64 {
        self.inner.size()
    }

    /// Strongest ground set the partition belongs to: "O", "E2", "E" or "raw".
    fn ground(&self) -> String {
        match self.inner.ground() {
            Ground::O => "O",
            Ground::E2 => "E2",
            Ground::E => "E",
            Ground::Raw => "raw",
        }
        .to_string()
    }

    /// Runs the forward merge/cross machine; returns (output, trace_json).
    fn phi(&self) -> PyResult<(PyPartition, String)> {
        let (out, trace) = phi(&self.inner).map_err(to_py)?;
        Ok((PyPartition::wrap(out), json_of(&trace)?))
    }

    /// Runs the backward cross/split machine; returns (output, trace_json).
    fn psi(&self) -> PyResult<(PyPartition, String)> {
        let (out, trace) = psi(&self.inner).map_err(to_py)?;
        Ok((PyPartition::wrap(CorePartition::new(out)), json_of(&trace)?))
    }

    /// True when the partition lies in the forward machine's image (all
    /// three equivalent membership routes are run and must agree).
    fn in_image(&self) -> PyResult<bool> {
        colored_partitions::bridge::in_e1_all(&self.inner).map_err(to_py)
    }

    /// True along one named membership route: "cond2", "cond3", "roundtrip".
    fn in_image_via(&self, route: &str) -> PyResult<bool> {
        let route = match route {
            "cond2" => E1Route::Cond2,
            "cond3" => E1Route::Cond3,
            "roundtrip" => E1Route::Roundtrip,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown route {other:?}; expected cond2, cond3 or roundtrip"
                )))
            }
        };
        colored_partitions::bridge::in_e1(&self.inner, route).map_err(to_py)
    }

    /// Full bridge analysis (index sets, bridge table, verdicts) as JSON.
    fn bridge_json(&self) -> PyResult<String> {
        json_of(&bridge_report(&self.inner).map_err(to_py)?)
    }

    /// The crossing permutation of the backward machine (1-based values).
    fn theta(&self) -> PyResult<Vec<usize>> {
        theta(&self.inner).map_err(to_py)
    }

    /// The Motzkin word over U, D, H.
    fn motzkin_word(&self) -> PyResult<String> {
        Ok(motzkin_word(&self.inner).map_err(to_py)?.0)
    }

    /// The weighted rooted forest as a Graphviz document.
    fn forest_dot(&self) -> PyResult<String> {
        Ok(dot_export(&forest(&self.inner).map_err(to_py)?))
    }

    /// The weighted rooted forest as JSON.
    fn forest_json(&self) -> PyResult<String> {
        json_of(&forest(&self.inner).map_err(to_py)?)
    }

    /// The weight-12 specialization for four colors, parts descending.
    fn specialize12(&self) -> PyResult<Vec<u64>> {
        specialize_12(&self.inner).map_err(to_py)
    }

    /// The partition in the JSON wire format (array of parts).
    fn to_json(&self) -> PyResult<String> {
        json_of(&self.inner)
    }

    /// Parses the JSON wire format (array of parts).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner: CorePartition =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        inner.validate().map_err(to_py)?;
        Ok(PyPartition::wrap(inner))
    }

    fn __repr__(&self) -> String {
        format!("Partition({})", self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &PyPartition) -> bool {
        self.inner == other.inner
    }
}

/// Lists every partition of a ground set ("O", "E" or "E2") with the exact
/// total size.
#[pyfunction]
fn enumerate_ground(set: &str, colors: u8, size: u64) -> PyResult<Vec<PyPartition>> {
    let all = match set {
        "O" | "o" => enumerate_o(colors, size),
        "E" | "e" => enumerate_e(colors, size),
        "E2" | "e2" => enumerate_e2(colors, size),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown ground set {other:?}; expected O, E or E2"
            )))
        }
    };
    Ok(all.into_iter().map(PyPartition::wrap).collect())
}

/// Mines the minimal forbidden chains within the bounds; returns
/// (partition, symbolic_word_or_None, family_name_or_None) triples.
#[pyfunction]
#[pyo3(signature = (colors, max_parts, max_size, no_cd_moves = false))]
fn mine(
    colors: u8,
    max_parts: usize,
    max_size: u32,
    no_cd_moves: bool,
) -> PyResult<Vec<(PyPartition, Option<String>, Option<String>)>> {
    let mined = mine_optimal(colors, max_parts, max_size).map_err(to_py)?;
    Ok(mined
        .iter()
        .filter(|p| !no_cd_moves || !has_double_special_pivot(&p.parts))
        .map(|p| {
            (
                PyPartition::wrap(p.partition()),
                symbolic_of(p).map(|s| s.to_string()),
                detect_family(colors, p),
            )
        })
        .collect())
}

/// Searches for all-secondary shortcut chains within the bounds.
#[pyfunction]
#[pyo3(signature = (colors, max_parts, max_size, skip_double_pivot = false))]
fn shortcuts(
    colors: u8,
    max_parts: usize,
    max_size: u32,
    skip_double_pivot: bool,
) -> PyResult<Vec<PyPartition>> {
    let found =
        find_shortcuts(colors, max_parts, max_size, skip_double_pivot).map_err(to_py)?;
    Ok(found
        .into_iter()
        .map(|p| PyPartition::wrap(p.partition()))
        .collect())
}

/// True when the counting identity holds for all degrees up to `max_q`.
#[pyfunction]
fn verify_identity(colors: u8, max_q: u64) -> PyResult<bool> {
    Ok(full_report(colors, max_q).map_err(to_py)?.identity_holds())
}

/// True when the counting inequality holds for all degrees up to `max_q`.
#[pyfunction]
fn verify_inequality(colors: u8, max_q: u64) -> PyResult<bool> {
    Ok(full_report(colors, max_q).map_err(to_py)?.inequality_holds())
}

/// The full count report (one row per color product and degree) as JSON.
#[pyfunction]
fn count_report_json(colors: u8, max_q: u64) -> PyResult<String> {
    json_of(&full_report(colors, max_q).map_err(to_py)?)
}

/// The two equinumerous mod-12 enumerations of `size`, as
/// (first_kind, second_kind) lists of descending integer partitions.
#[pyfunction]
fn corollary12(size: u64) -> PyResult<(Vec<Vec<u64>>, Vec<Vec<u64>>)> {
    Ok((
        corollary12_first_kind(size).map_err(to_py)?,
        corollary12_second_kind(size).map_err(to_py)?,
    ))
}

#[pymodule]
fn colored_partitions_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPartition>()?;
    m.add_function(wrap_pyfunction!(enumerate_ground, m)?)?;
    m.add_function(wrap_pyfunction!(mine, m)?)?;
    m.add_function(wrap_pyfunction!(shortcuts, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identity, m)?)?;
    m.add_function(wrap_pyfunction!(verify_inequality, m)?)?;
    m.add_function(wrap_pyfunction!(count_report_json, m)?)?;
    m.add_function(wrap_pyfunction!(corollary12, m)?)?;
    Ok(())
}
