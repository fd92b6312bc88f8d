//! Python bindings: channel metrics, construction sweeps, and the decoding
//! simulation, mirroring the command-line surface.

use mlpolar::{
    asymptotic_fractions, certified_set_size_check, combine_split, construct, simulate, synthesize,
    ChannelSpec, Error, Limits, PairPermutation, PauliLabel, QuaternaryChannel, SchedulePolicy,
    ZPair,
};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::DepthCapExceeded { .. }
        | Error::DepthTooLarge { .. }
        | Error::WidthCapExceeded { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_policy(name: &str) -> PyResult<SchedulePolicy> {
    SchedulePolicy::from_name(name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown schedule {name:?}")))
}

fn parse_gamma(name: &str) -> PyResult<PairPermutation> {
    match name {
        "L" | "gamma_l" => Ok(PairPermutation::gamma_l()),
        "1" | "gamma_1" => Ok(PairPermutation::gamma_1()),
        "2" | "gamma_2" => Ok(PairPermutation::gamma_2()),
        _ => Err(PyValueError::new_err(format!("unknown permutation {name:?}"))),
    }
}

/// A quaternary-input channel held as its transition matrix.
#[pyclass(name = "Channel", from_py_object)]
#[derive(Clone)]
struct PyChannel {
    inner: QuaternaryChannel,
}

#[pymethods]
impl PyChannel {
    /// Build from a channel-spec JSON string (pauli / cmp / erasure).
    #[staticmethod]
    fn from_spec(spec: &str) -> PyResult<Self> {
        let spec = ChannelSpec::parse(spec).map_err(to_py_err)?;
        Ok(Self { inner: spec.lower().map_err(to_py_err)? })
    }

    #[staticmethod]
    fn pauli(p_i: f64, p_z: f64, p_x: f64, p_y: f64) -> PyResult<Self> {
        Ok(Self {
            inner: QuaternaryChannel::from_pauli([p_i, p_z, p_x, p_y]).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn erasure(epsilon: f64) -> PyResult<Self> {
        Ok(Self { inner: QuaternaryChannel::erasure(epsilon).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn from_rows(rows: [Vec<f64>; 4]) -> PyResult<Self> {
        Ok(Self { inner: QuaternaryChannel::from_rows(&rows).map_err(to_py_err)? })
    }

    fn num_outputs(&self) -> usize {
        self.inner.num_outputs()
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        (0..4)
            .map(|x| self.inner.columns().iter().map(|c| c[x]).collect())
            .collect()
    }

    /// All scalar metrics as a dict.
    fn metrics<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let m = self.inner.metric_vector();
        let d = PyDict::new(py);
        d.set_item("z_pair", m.z_pair.to_vec())?;
        d.set_item("z_d", m.z_d.to_vec())?;
        d.set_item("z_global", m.z_global)?;
        d.set_item("i_sym", m.i_sym)?;
        d.set_item("z_partial", m.z_partial.to_vec())?;
        Ok(d)
    }

    fn classify(&self, delta: f64) -> PyResult<String> {
        Ok(self.inner.classify(delta).map_err(to_py_err)?.name().to_string())
    }

    /// One combining/splitting step; returns (marginalized, conditioned).
    fn combine_split(&self, gamma: &str) -> PyResult<(Self, Self)> {
        let g = parse_gamma(gamma)?;
        let (b, good) = combine_split(&self.inner, &g).map_err(to_py_err)?;
        Ok((Self { inner: b }, Self { inner: good }))
    }

    /// Virtual channel along a path of '0'/'1' characters.
    fn synthesize(&self, path: &str, schedule: &str) -> PyResult<Self> {
        let policy = parse_policy(schedule)?;
        let w = synthesize(&self.inner, path, policy, &Limits::default()).map_err(to_py_err)?;
        Ok(Self { inner: w })
    }

    fn reduce_outputs(&self) -> Self {
        Self { inner: self.inner.reduce_outputs() }
    }

    fn equivalent(&self, other: &Self) -> bool {
        self.inner.equivalent(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!("Channel(outputs={})", self.inner.num_outputs())
    }
}

fn report_dict<'py>(
    py: Python<'py>,
    rep: &mlpolar::ConstructionReport,
    with_records: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("n", rep.n)?;
    d.set_item("delta", rep.delta)?;
    d.set_item("schedule", rep.policy.name())?;
    let counts = PyDict::new(py);
    counts.set_item("A", rep.counts.a)?;
    counts.set_item("B", rep.counts.b)?;
    counts.set_item("C", rep.counts.c)?;
    counts.set_item("D", rep.counts.d)?;
    counts.set_item("unpolarized", rep.counts.unpolarized)?;
    d.set_item("counts", counts)?;
    let (fa, fbc, fd, fu) = rep.fractions();
    d.set_item("fractions", (fa, fbc, fd, fu))?;
    d.set_item("covered_fraction", rep.covered_fraction())?;
    let p10 = rep.set_size_check();
    d.set_item("bound_d", (p10.bound_d.lhs, p10.bound_d.rhs, p10.bound_d.holds))?;
    d.set_item("bound_bc", (p10.bound_bc.lhs, p10.bound_bc.rhs, p10.bound_bc.holds))?;
    d.set_item("union_bound", rep.union_bound())?;
    if with_records {
        let records: Vec<(f64, f64, f64, &'static str)> = rep
            .records
            .iter()
            .map(|r| (r.z1, r.z2, r.t_value(), r.class.name()))
            .collect();
        d.set_item("records", records)?;
    }
    Ok(d)
}

/// Classify all 2^n virtual channels of a spec-described channel.
#[pyfunction]
#[pyo3(signature = (spec, n, schedule="fixed", delta=1e-6, with_records=false, force_generic=false))]
fn construct_report<'py>(
    py: Python<'py>,
    spec: &str,
    n: usize,
    schedule: &str,
    delta: f64,
    with_records: bool,
    force_generic: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = ChannelSpec::parse(spec).map_err(to_py_err)?;
    let policy = parse_policy(schedule)?;
    let rep = construct(&spec, n, policy, delta, &Limits::default(), force_generic)
        .map_err(to_py_err)?;
    report_dict(py, &rep, with_records)
}

/// Limit fractions (|A|/N, (|B|+|C|)/N, |D|/N) for an erasure channel.
#[pyfunction]
fn erasure_asymptotic_fractions(epsilon: f64) -> PyResult<(f64, f64, f64)> {
    let z = ZPair::new(epsilon, epsilon).map_err(to_py_err)?;
    Ok(asymptotic_fractions(z))
}

/// Monte Carlo frame-error simulation; returns the aggregate counts.
#[pyfunction]
#[pyo3(signature = (spec, n, schedule="fixed", delta=1e-3, trials=1000, seed=0))]
fn simulate_decoding<'py>(
    py: Python<'py>,
    spec: &str,
    n: usize,
    schedule: &str,
    delta: f64,
    trials: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = ChannelSpec::parse(spec).map_err(to_py_err)?;
    let policy = parse_policy(schedule)?;
    let rep = simulate(&spec, n, policy, delta, trials, seed, &Limits::default())
        .map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("trials", rep.trials)?;
    d.set_item("frame_errors", rep.frame_errors)?;
    d.set_item("fer", rep.fer())?;
    d.set_item("seed", rep.seed)?;
    d.set_item("class_a_bit_errors", rep.class_a_bit_errors)?;
    d.set_item("class_b_bit_errors", rep.class_b_bit_errors)?;
    d.set_item("class_c_bit_errors", rep.class_c_bit_errors)?;
    Ok(d)
}

/// One-sided certified check of the set-size bounds at depths where exact
/// synthesis is out of reach.
#[pyfunction]
#[pyo3(signature = (spec, n, delta=0.1, max_components=4096))]
fn certified_set_size_bounds<'py>(
    py: Python<'py>,
    spec: &str,
    n: usize,
    delta: f64,
    max_components: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = ChannelSpec::parse(spec).map_err(to_py_err)?;
    let comps = spec.components().map_err(to_py_err)?;
    let limits = Limits { max_components, ..Limits::default() };
    let cert = certified_set_size_check(&comps, n, delta, &limits).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("exact_fraction", cert.counts.exact_fraction())?;
    d.set_item("bound_d", (cert.bound_d.lhs, cert.bound_d.rhs, cert.bound_d.holds))?;
    d.set_item("bound_bc", (cert.bound_bc.lhs, cert.bound_bc.rhs, cert.bound_bc.holds))?;
    Ok(d)
}

/// Run one of the randomized property suites; returns per-property tuples
/// (name, passed, samples, worst_slack).
#[pyfunction]
#[pyo3(signature = (suite, samples=200, seed=0))]
fn run_verify_suite(
    suite: &str,
    samples: usize,
    seed: u64,
) -> PyResult<Vec<(String, bool, usize, f64)>> {
    let results = mlpolar::verify::run_suite(suite, samples, seed).map_err(to_py_err)?;
    Ok(results
        .into_iter()
        .map(|r| (r.name.to_string(), r.passed(), r.samples, r.worst_slack))
        .collect())
}

/// Apply a pair permutation to two labels ("I", "Z", "X", "Y").
#[pyfunction]
fn apply_permutation(gamma: &str, u: &str, v: &str) -> PyResult<(String, String)> {
    let g = parse_gamma(gamma)?;
    let (u, v) = (
        PauliLabel::from_name(u).ok_or_else(|| PyValueError::new_err("bad label"))?,
        PauliLabel::from_name(v).ok_or_else(|| PyValueError::new_err("bad label"))?,
    );
    let (a, b) = g.apply(u, v);
    Ok((a.name().to_string(), b.name().to_string()))
}

#[pymodule]
fn mlpolar_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChannel>()?;
    m.add_function(wrap_pyfunction!(construct_report, m)?)?;
    m.add_function(wrap_pyfunction!(erasure_asymptotic_fractions, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_decoding, m)?)?;
    m.add_function(wrap_pyfunction!(certified_set_size_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify_suite, m)?)?;
    m.add_function(wrap_pyfunction!(apply_permutation, m)?)?;
    Ok(())
}
