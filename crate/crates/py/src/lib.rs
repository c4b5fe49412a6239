//! Python bindings over the fixture engine.
//!
//! Exposes the four commands on JSON fixture strings plus a few direct
//! helpers for shift systems. Reports come back as JSON strings; schema
//! problems raise `ValueError`, exhausted budgets raise `RuntimeError`.
//!
//! Usage from Python:
//!
//! ```text
//! import entrospace_py as es
//! report, code = es.run("entropy", fixture_json, horizon=10)
//! es.full_shift_entropy(3, 10)   # ≈ log 3
//! ```

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use entrospace::symbolic::{sft_space, shift_preimage_map, window, Sft, Sidedness, WindowNorm};
use entrospace::{entropy_relative, EntropyParams};
use entrospace_cli::{exit_code, render_json, run_str, CliError, Command, Options};

fn parse_command(name: &str) -> PyResult<Command> {
    match name {
        "check" => Ok(Command::Check),
        "entropy" => Ok(Command::Entropy),
        "expansivity" => Ok(Command::Expansivity),
        "laws" => Ok(Command::Laws),
        other => Err(PyValueError::new_err(format!(
            "unknown command {other:?} (use check, entropy, expansivity or laws)"
        ))),
    }
}

fn raise(e: CliError) -> PyErr {
    match e {
        CliError::Schema(msg) => PyValueError::new_err(msg),
        CliError::Analysis(msg) => PyValueError::new_err(msg),
        CliError::Budget(msg) | CliError::Io(msg) => PyRuntimeError::new_err(msg),
    }
}

/// Run one command over a JSON fixture string.
///
/// Returns `(report_json, exit_code)`; exit code 0 means every analysis
/// passed, 3 that some analysis failed (the report says which).
#[pyfunction]
#[pyo3(signature = (command, fixture_json, horizon=None, budget=None, tolerance=None, seed=None))]
fn run(
    command: &str,
    fixture_json: &str,
    horizon: Option<u32>,
    budget: Option<u64>,
    tolerance: Option<f64>,
    seed: Option<u64>,
) -> PyResult<(String, i32)> {
    let cmd = parse_command(command)?;
    let opts = Options { horizon, budget, tolerance, seed };
    let outcome = run_str(cmd, fixture_json, &opts);
    let code = exit_code(&outcome);
    match outcome {
        Ok(report) => Ok((render_json(&report), code)),
        Err(e) => Err(raise(e)),
    }
}

/// Entropy of the full shift on `alphabet` symbols relative to the
/// singleton window, as a quick sanity value (always `log alphabet`).
#[pyfunction]
#[pyo3(signature = (alphabet, horizon=10))]
fn full_shift_entropy(alphabet: usize, horizon: u32) -> PyResult<f64> {
    let sft = Sft::full_shift(alphabet, Sidedness::TwoSided)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let space = sft_space(&sft, WindowNorm::H);
    let map = shift_preimage_map(&sft, &space);
    let w0 = window(&space, &sft, 0, 0).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let est = entropy_relative(&space, &map, &w0, &EntropyParams::with_horizon(horizon.max(1)))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(est.value().finite().unwrap_or(f64::INFINITY))
}

/// Per-step trajectory quotients of an arbitrary 0/1-matrix shift,
/// relative to the singleton window. Returns a list of floats converging
/// to the growth rate of the admissible-word counts.
#[pyfunction]
#[pyo3(signature = (transitions, horizon=16))]
fn sft_entropy_quotients(transitions: Vec<Vec<u8>>, horizon: u32) -> PyResult<Vec<f64>> {
    let k = transitions.len();
    let sft = Sft::new(k, Sidedness::TwoSided, transitions)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let space = sft_space(&sft, WindowNorm::H);
    let map = shift_preimage_map(&sft, &space);
    let w0 = window(&space, &sft, 0, 0).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let est = entropy_relative(&space, &map, &w0, &EntropyParams::with_horizon(horizon.max(1)))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(est
        .quotients
        .iter()
        .map(|q| q.finite().unwrap_or(f64::INFINITY))
        .collect())
}

#[pymodule]
fn entrospace_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(full_shift_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(sft_entropy_quotients, m)?)?;
    Ok(())
}
