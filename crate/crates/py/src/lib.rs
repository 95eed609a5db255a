//! Python bindings. Rankings are 1-based in rank order (`[3, 1, 2]` means
//! input 3 is most likely); exact rationals come back as `fractions.Fraction`.

use std::path::PathBuf;

use channel_space::io::{channel_to_csv, channel_to_json, parse_channel, read_channel, Format};
use channel_space::number::{parse_rational, rational_from_f64};
use channel_space::oracle;
use channel_space::ranking::CONVENTION;
use channel_space::verify::{example6_table, run_campaign, Check, VerifyConfig};
use channel_space::{
    Channel, Error, Prior, Ranking, TieRule, Validation, WeakOrder,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyFloat, PyInt, PyString};

create_exception!(channel_space_py, ChannelSpaceError, PyValueError);

fn err(e: Error) -> PyErr {
    ChannelSpaceError::new_err(e.to_string())
}

/// Accepts `str` (`"5/8"`, `"0.625"`), `int`, `float` (read by its shortest
/// decimal form), or anything whose `str()` parses, such as `Fraction`.
fn rational(obj: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    if obj.is_instance_of::<PyBool>() {
        return Err(ChannelSpaceError::new_err("booleans are not numbers"));
    }
    if let Ok(s) = obj.cast::<PyString>() {
        return parse_rational(&s.to_cow()?).map_err(err);
    }
    if obj.is_instance_of::<PyInt>() {
        return Ok(BigRational::from_integer(obj.extract::<BigInt>()?));
    }
    if let Ok(f) = obj.cast::<PyFloat>() {
        return rational_from_f64(f.value()).map_err(err);
    }
    parse_rational(&obj.str()?.to_cow()?).map_err(err)
}

fn fraction<'py>(py: Python<'py>, x: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((x.numer().clone(), x.denom().clone()))
}

fn tie_rule(epsilon: Option<&Bound<'_, PyAny>>) -> PyResult<TieRule> {
    match epsilon {
        None => Ok(TieRule::Exact),
        Some(e) => TieRule::epsilon(rational(e)?).map_err(err),
    }
}

fn prior(weights: Option<Vec<Bound<'_, PyAny>>>) -> PyResult<Prior> {
    match weights {
        None => Ok(Prior::Uniform),
        Some(w) => Prior::explicit(w.iter().map(rational).collect::<PyResult<_>>()?).map_err(err),
    }
}

fn from_json<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (value.to_string(),))
}

#[pyclass(name = "Channel", module = "channel_space_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyChannel {
    inner: Channel,
}

#[pymethods]
impl PyChannel {
    /// Rows are inputs. Entries may be strings, ints, floats or Fractions.
    #[new]
    #[pyo3(signature = (entries, tolerance = None, normalize = false))]
    fn new(entries: Vec<Vec<Bound<'_, PyAny>>>, tolerance: Option<Bound<'_, PyAny>>, normalize: bool) -> PyResult<Self> {
        let grid = entries
            .iter()
            .map(|row| row.iter().map(rational).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        let mut rules = match tolerance {
            Some(t) => Validation::with_tolerance(rational(&t)?),
            None => Validation::default(),
        };
        rules.normalize = normalize;
        let inner = Channel::validate(grid, &rules).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = parse_channel(text, Format::Json, &Validation::default()).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        let inner = parse_channel(text, Format::Csv, &Validation::default()).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        let inner = read_channel(&path, &Validation::default()).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n_inputs()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m_outputs()
    }

    fn entries<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        self.inner
            .rows()
            .iter()
            .map(|row| row.iter().map(|x| fraction(py, x)).collect())
            .collect()
    }

    fn to_json(&self) -> String {
        channel_to_json(&self.inner).to_string()
    }

    fn to_csv(&self) -> String {
        channel_to_csv(&self.inner)
    }

    /// Rank of each input in each column, one row per input.
    #[pyo3(signature = (epsilon = None))]
    fn weak_order_matrix(&self, epsilon: Option<Bound<'_, PyAny>>) -> PyResult<Vec<Vec<usize>>> {
        let tie = tie_rule(epsilon.as_ref())?;
        Ok(channel_space::weak_order_matrix(&self.inner, &tie).rows())
    }

    #[pyo3(signature = (epsilon = None))]
    fn is_stable(&self, epsilon: Option<Bound<'_, PyAny>>) -> PyResult<bool> {
        Ok(channel_space::is_stable(&self.inner, &tie_rule(epsilon.as_ref())?))
    }

    fn __repr__(&self) -> String {
        format!("Channel({})", self.to_json())
    }
}

#[pyclass(name = "Ranking", module = "channel_space_py", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyRanking {
    inner: Ranking,
}

#[pymethods]
impl PyRanking {
    /// `perm[k]` is the input at rank `k + 1`, inputs numbered from 1.
    #[new]
    fn new(perm: Vec<usize>) -> PyResult<Self> {
        Ranking::from_perm_one_based(&perm).map(|inner| Self { inner }).map_err(err)
    }

    /// `ranks[i]` is the rank of input `i + 1`.
    #[staticmethod]
    fn from_ranks(ranks: Vec<usize>) -> PyResult<Self> {
        Ranking::from_ranks(&ranks).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        Self { inner: Ranking::identity(n) }
    }

    #[staticmethod]
    fn reversal(n: usize) -> Self {
        Self { inner: Ranking::reversal(n) }
    }

    /// Swaps the inputs at ranks `r` and `r + 1` (1-based).
    #[staticmethod]
    fn transposition(n: usize, r: usize) -> PyResult<Self> {
        if r == 0 {
            return Err(err(Error::IndexOutOfRange { index: r, max: n.saturating_sub(1) }));
        }
        Ranking::transposition(n, r - 1).map(|inner| Self { inner }).map_err(err)
    }

    #[getter]
    fn perm(&self) -> Vec<usize> {
        self.inner.perm_one_based()
    }

    #[getter]
    fn ranks(&self) -> Vec<usize> {
        self.inner.ranks()
    }

    fn inverse(&self) -> Self {
        Self { inner: self.inner.inverse() }
    }

    /// `self ∘ other`.
    fn compose(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        let other = ranking(other)?;
        self.inner.compose(&other).map(|inner| Self { inner }).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Ranking({:?})", self.inner.perm_one_based())
    }
}

/// A `Ranking` or a plain list in rank order.
fn ranking(obj: &Bound<'_, PyAny>) -> PyResult<Ranking> {
    if let Ok(r) = obj.cast::<PyRanking>() {
        return Ok(r.get().inner.clone());
    }
    let perm: Vec<usize> = obj.extract()?;
    Ranking::from_perm_one_based(&perm).map_err(err)
}

#[pyfunction]
fn s_pair(sigma: &Bound<'_, PyAny>, phi: &Bound<'_, PyAny>) -> PyResult<BigInt> {
    let count = channel_space::s_pair(&ranking(sigma)?, &ranking(phi)?).map_err(err)?;
    Ok(count.value.into())
}

#[pyfunction]
fn oracle_s_pair(sigma: &Bound<'_, PyAny>, phi: &Bound<'_, PyAny>) -> PyResult<BigInt> {
    let count = oracle::oracle_s_pair(&ranking(sigma)?, &ranking(phi)?).map_err(err)?;
    Ok(count.value.into())
}

#[pyfunction]
fn agreement_probability<'py>(py: Python<'py>, sigma: &Bound<'py, PyAny>, phi: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let p = channel_space::agreement_probability(&ranking(sigma)?, &ranking(phi)?).map_err(err)?;
    fraction(py, &p)
}

#[pyfunction]
fn decoding_distance<'py>(py: Python<'py>, sigma: &Bound<'py, PyAny>, phi: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let d = channel_space::decoding_distance(&ranking(sigma)?, &ranking(phi)?).map_err(err)?;
    fraction(py, &d)
}

#[pyfunction]
fn kendall_tau(sigma: &Bound<'_, PyAny>, phi: &Bound<'_, PyAny>) -> PyResult<u64> {
    channel_space::kendall_tau(&ranking(sigma)?, &ranking(phi)?).map_err(err)
}

/// `S(τ_r ∘ σ) - S(σ)` for the swap of ranks `r` and `r + 1` (1-based).
#[pyfunction]
fn transposition_delta(sigma: &Bound<'_, PyAny>, r: usize) -> PyResult<BigInt> {
    let sigma = ranking(sigma)?;
    if r == 0 {
        return Err(err(Error::IndexOutOfRange { index: r, max: sigma.len().saturating_sub(1) }));
    }
    channel_space::transposition_delta(&sigma, r - 1).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (p, q, epsilon = None))]
fn decoding_equivalent(p: PyRef<'_, PyChannel>, q: PyRef<'_, PyChannel>, epsilon: Option<Bound<'_, PyAny>>) -> PyResult<bool> {
    channel_space::decoding_equivalent(&p.inner, &q.inner, &tie_rule(epsilon.as_ref())?).map_err(err)
}

/// Compares the decoder sets of every code directly.
#[pyfunction]
fn oracle_same_decoders(p: PyRef<'_, PyChannel>, q: PyRef<'_, PyChannel>) -> PyResult<bool> {
    oracle::oracle_same_decoders(&p.inner, &q.inner).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (p, q, prior = None, epsilon = None))]
fn radial_agreement<'py>(
    py: Python<'py>,
    p: PyRef<'py, PyChannel>,
    q: PyRef<'py, PyChannel>,
    prior: Option<Vec<Bound<'py, PyAny>>>,
    epsilon: Option<Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyDict>> {
    let report = channel_space::radial_agreement(&p.inner, &q.inner, &self::prior(prior)?, &tie_rule(epsilon.as_ref())?)
        .map_err(err)?;
    let out = PyDict::new(py);
    let s: Vec<BigInt> = report.per_column_s.iter().cloned().map(BigInt::from).collect();
    out.set_item("per_column_s", s)?;
    let norms = report
        .column_norms
        .iter()
        .map(|x| fraction(py, x))
        .collect::<PyResult<Vec<_>>>()?;
    out.set_item("column_norms", norms)?;
    out.set_item("probability", fraction(py, &report.probability)?)?;
    out.set_item("distance", fraction(py, &report.distance)?)?;
    out.set_item("convention", CONVENTION)?;
    out.set_item("prior", &report.prior)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (p, q, prior = None, epsilon = None))]
fn radial_decoding_distance<'py>(
    py: Python<'py>,
    p: PyRef<'py, PyChannel>,
    q: PyRef<'py, PyChannel>,
    prior: Option<Vec<Bound<'py, PyAny>>>,
    epsilon: Option<Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyAny>> {
    let d = channel_space::radial_decoding_distance(&p.inner, &q.inner, &self::prior(prior)?, &tie_rule(epsilon.as_ref())?)
        .map_err(err)?;
    fraction(py, &d)
}

#[pyfunction]
#[pyo3(signature = (p, q, prior = None))]
fn oracle_radial_probability<'py>(
    py: Python<'py>,
    p: PyRef<'py, PyChannel>,
    q: PyRef<'py, PyChannel>,
    prior: Option<Vec<Bound<'py, PyAny>>>,
) -> PyResult<Bound<'py, PyAny>> {
    let pr = oracle::oracle_radial_probability(&p.inner, &q.inner, &self::prior(prior)?).map_err(err)?;
    fraction(py, &pr)
}

#[pyfunction]
#[pyo3(signature = (p, q, epsilon = None))]
fn global_decoding_distance<'py>(
    py: Python<'py>,
    p: PyRef<'py, PyChannel>,
    q: PyRef<'py, PyChannel>,
    epsilon: Option<Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyAny>> {
    let d = channel_space::global_decoding_distance(&p.inner, &q.inner, &tie_rule(epsilon.as_ref())?).map_err(err)?;
    fraction(py, &d)
}

/// Every weak order on `n` inputs as a rank vector.
#[pyfunction]
fn enumerate_weak_orders(n: usize) -> PyResult<Vec<Vec<usize>>> {
    let all = channel_space::enumerate_weak_orders(n).map_err(err)?;
    Ok(all.into_iter().map(|w| w.ranks().to_vec()).collect())
}

#[pyfunction]
fn cone_dimension(ranks: Vec<usize>) -> PyResult<usize> {
    let w = WeakOrder::from_ranks(ranks).map_err(err)?;
    Ok(channel_space::cone_dimension(&w))
}

#[pyfunction]
#[pyo3(signature = (p, q, samples, seed, prior = None))]
fn monte_carlo_radial<'py>(
    py: Python<'py>,
    p: PyRef<'py, PyChannel>,
    q: PyRef<'py, PyChannel>,
    samples: u64,
    seed: u64,
    prior: Option<Vec<Bound<'py, PyAny>>>,
) -> PyResult<Bound<'py, PyAny>> {
    let prior = self::prior(prior)?;
    let (p, q) = (p.inner.clone(), q.inner.clone());
    let est = py
        .detach(|| channel_space::monte_carlo_radial(&p, &q, &prior, samples, seed))
        .map_err(err)?;
    from_json(py, &serde_json::to_value(&est).expect("estimate serializes"))
}

/// Runs verification checks and returns the campaign report as a dict.
#[pyfunction]
#[pyo3(signature = (suite = None, seed = 0, exhaustive_n = 4))]
fn verify<'py>(py: Python<'py>, suite: Option<Vec<String>>, seed: u64, exhaustive_n: usize) -> PyResult<Bound<'py, PyAny>> {
    let checks = match suite {
        None => Check::ALL.to_vec(),
        Some(names) => names
            .iter()
            .map(|n| n.parse::<Check>().map_err(ChannelSpaceError::new_err))
            .collect::<PyResult<Vec<_>>>()?,
    };
    let cfg = VerifyConfig {
        seed,
        exhaustive_n,
        ..VerifyConfig::default()
    };
    let campaign = py.detach(|| run_campaign(&checks, &cfg)).map_err(err)?;
    from_json(py, &serde_json::to_value(&campaign).expect("campaign serializes"))
}

/// Published values of the three-channel example next to recomputed ones.
#[pyfunction]
fn worked_example_table(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    from_json(py, &example6_table().map_err(err)?)
}

#[pymodule]
pub fn channel_space_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ChannelSpaceError", m.py().get_type::<ChannelSpaceError>())?;
    m.add("CONVENTION", CONVENTION)?;
    m.add_class::<PyChannel>()?;
    m.add_class::<PyRanking>()?;
    m.add_function(wrap_pyfunction!(s_pair, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_s_pair, m)?)?;
    m.add_function(wrap_pyfunction!(agreement_probability, m)?)?;
    m.add_function(wrap_pyfunction!(decoding_distance, m)?)?;
    m.add_function(wrap_pyfunction!(kendall_tau, m)?)?;
    m.add_function(wrap_pyfunction!(transposition_delta, m)?)?;
    m.add_function(wrap_pyfunction!(decoding_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_same_decoders, m)?)?;
    m.add_function(wrap_pyfunction!(radial_agreement, m)?)?;
    m.add_function(wrap_pyfunction!(radial_decoding_distance, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_radial_probability, m)?)?;
    m.add_function(wrap_pyfunction!(global_decoding_distance, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_weak_orders, m)?)?;
    m.add_function(wrap_pyfunction!(cone_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo_radial, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(worked_example_table, m)?)?;
    Ok(())
}
