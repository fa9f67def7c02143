//! Python module `vmsort`.
//!
//! Elements cross the boundary as Python ints and must fit in a signed
//! 32-bit integer. Sorting releases the GIL.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use vmsort::cachemerge::{half_merge_serial_back, half_merge_vectorized, HalfScratch};
use vmsort::networks::{by_name, cost_report, verify_network, ComparatorNetwork, VerifyMode};
use vmsort::{AsymVariant, Element, InCacheMerge, MergeFamily, MultiwayConfig, Run, TransposeKernel};

fn value_err(e: vmsort::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_variant(name: &str) -> PyResult<AsymVariant> {
    AsymVariant::from_name(name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown variant {name:?} (expected v1, v2 or v3)")))
}

fn parse_in_cache(name: &str) -> PyResult<InCacheMerge> {
    match name {
        "half" => Ok(InCacheMerge::HalfVectorized),
        "half-serial" => Ok(InCacheMerge::HalfSerial),
        "naive" => Ok(InCacheMerge::NaiveVectorized),
        "naive-serial" => Ok(InCacheMerge::NaiveSerial),
        _ => Err(PyValueError::new_err(format!("unknown in-cache merge {name:?}"))),
    }
}

fn in_cache_name(m: InCacheMerge) -> &'static str {
    match m {
        InCacheMerge::HalfVectorized => "half",
        InCacheMerge::HalfSerial => "half-serial",
        InCacheMerge::NaiveVectorized => "naive",
        InCacheMerge::NaiveSerial => "naive-serial",
    }
}

/// Pipeline configuration.
#[pyclass(name = "SortConfig", from_py_object)]
#[derive(Clone)]
struct PySortConfig {
    inner: vmsort::SortConfig,
}

#[pymethods]
impl PySortConfig {
    #[new]
    #[pyo3(signature = (threads=1, variant="v1", block_size=vmsort::cachemerge::DEFAULT_CACHE_BLOCK, lane_width=4, family="oddeven", in_cache="half", scalar_rounds=None))]
    fn new(
        threads: usize,
        variant: &str,
        block_size: usize,
        lane_width: usize,
        family: &str,
        in_cache: &str,
        scalar_rounds: Option<usize>,
    ) -> PyResult<Self> {
        let family = match family {
            "oddeven" => MergeFamily::OddEven,
            "bitonic" => MergeFamily::Bitonic,
            _ => return Err(PyValueError::new_err(format!("unknown family {family:?}"))),
        };
        let inner = vmsort::SortConfig {
            threads,
            variant: parse_variant(variant)?,
            block_size,
            lane_width,
            family,
            in_cache: parse_in_cache(in_cache)?,
            scalar_rounds,
            transpose: TransposeKernel::default(),
            ..Default::default()
        };
        inner.validate().map_err(value_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn threads(&self) -> usize {
        self.inner.threads
    }

    #[getter]
    fn variant(&self) -> &'static str {
        self.inner.variant.name()
    }

    #[getter]
    fn block_size(&self) -> usize {
        self.inner.block_size
    }

    #[getter]
    fn lane_width(&self) -> usize {
        self.inner.lane_width
    }

    #[getter]
    fn in_cache(&self) -> &'static str {
        in_cache_name(self.inner.in_cache)
    }

    fn __repr__(&self) -> String {
        format!(
            "SortConfig(threads={}, variant={:?}, block_size={}, lane_width={}, in_cache={:?})",
            self.inner.threads,
            self.inner.variant.name(),
            self.inner.block_size,
            self.inner.lane_width,
            in_cache_name(self.inner.in_cache)
        )
    }
}

/// Phase timings of one sort.
#[pyclass(name = "SortStats", frozen)]
struct PySortStats {
    #[pyo3(get)]
    in_thread_ns: u128,
    #[pyo3(get)]
    out_of_thread_ns: u128,
    #[pyo3(get)]
    threads: usize,
    #[pyo3(get)]
    rounds: usize,
    #[pyo3(get)]
    peak_aux: usize,
}

#[pymethods]
impl PySortStats {
    fn __repr__(&self) -> String {
        format!(
            "SortStats(in_thread_ns={}, out_of_thread_ns={}, threads={}, rounds={}, peak_aux={})",
            self.in_thread_ns, self.out_of_thread_ns, self.threads, self.rounds, self.peak_aux
        )
    }
}

impl From<vmsort::SortStats> for PySortStats {
    fn from(s: vmsort::SortStats) -> Self {
        Self {
            in_thread_ns: s.in_thread.as_nanos(),
            out_of_thread_ns: s.out_of_thread.as_nanos(),
            threads: s.threads,
            rounds: s.rounds,
            peak_aux: s.peak_aux,
        }
    }
}

/// A comparator network with lane-tagged stages.
#[pyclass(name = "Network", frozen)]
struct PyNetwork {
    inner: ComparatorNetwork,
}

#[pymethods]
impl PyNetwork {
    /// Built-in network by name: `oddevenN`, `bitonicN`, `sorter16`,
    /// `asym-v1`, `asym-v2`.
    #[new]
    #[pyo3(signature = (name, lanes=4))]
    fn new(name: &str, lanes: usize) -> PyResult<Self> {
        let inner = by_name(name).and_then(|n| n.with_lanes(lanes)).map_err(value_err)?;
        Ok(Self { inner })
    }

    /// Parses the dump format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: text.parse().map_err(value_err)?,
        })
    }

    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }

    #[getter]
    fn depth(&self) -> usize {
        self.inner.depth()
    }

    fn comparators(&self) -> Vec<Vec<(usize, usize)>> {
        self.inner.raw_stages()
    }

    fn dump(&self) -> String {
        self.inner.to_string()
    }

    /// `{"comparators": .., "intra_exchanges": .., "stages": ..}`
    #[pyo3(signature = (lanes=4))]
    fn cost(&self, lanes: usize) -> std::collections::BTreeMap<&'static str, usize> {
        let c = cost_report(&self.inner, lanes);
        [
            ("comparators", c.comparators),
            ("intra_exchanges", c.intra_exchanges),
            ("stages", c.stages),
        ]
        .into()
    }

    /// Zero-one check. `mode` is "sorter" or "merger"; `split` sets the
    /// first run length in merger mode.
    #[pyo3(signature = (mode="merger", split=None))]
    fn verify(&self, py: Python<'_>, mode: &str, split: Option<usize>) -> PyResult<bool> {
        let mode = match (mode, split) {
            ("sorter", _) => VerifyMode::Sorter,
            ("merger", None) => VerifyMode::Merger,
            ("merger", Some(k)) => VerifyMode::MergerSplit(k),
            _ => return Err(PyValueError::new_err(format!("unknown mode {mode:?}"))),
        };
        py.detach(|| verify_network(&self.inner, mode)).map_err(value_err)
    }

    fn apply(&self, mut data: Vec<Element>) -> PyResult<Vec<Element>> {
        if data.len() < self.inner.width() {
            return Err(PyValueError::new_err(format!(
                "need at least {} elements",
                self.inner.width()
            )));
        }
        self.inner.apply(&mut data);
        Ok(data)
    }

    fn __repr__(&self) -> String {
        format!("Network(width={}, depth={})", self.inner.width(), self.inner.depth())
    }
}

/// Returns a sorted copy of `data`.
#[pyfunction]
#[pyo3(signature = (data, config=None))]
fn sort(py: Python<'_>, mut data: Vec<Element>, config: Option<PySortConfig>) -> PyResult<Vec<Element>> {
    let cfg = config.map(|c| c.inner).unwrap_or_default();
    py.detach(|| vmsort::sort_with(&mut data, &cfg)).map_err(value_err)?;
    Ok(data)
}

/// Like `sort`, also returning the phase timings.
#[pyfunction]
#[pyo3(signature = (data, config=None))]
fn sort_with_stats(
    py: Python<'_>,
    mut data: Vec<Element>,
    config: Option<PySortConfig>,
) -> PyResult<(Vec<Element>, PySortStats)> {
    let cfg = config.map(|c| c.inner).unwrap_or_default();
    let stats = py.detach(|| vmsort::sort_with(&mut data, &cfg)).map_err(value_err)?;
    Ok((data, stats.into()))
}

/// Sorts one 64-element block with the register-level sorter.
#[pyfunction]
fn sort_block(mut data: Vec<Element>) -> PyResult<Vec<Element>> {
    vmsort::sort_block(&mut data).map_err(value_err)?;
    Ok(data)
}

#[pyfunction]
fn cmpx_scalar(a: Element, b: Element) -> (Element, Element) {
    vmsort::cmpx_scalar(a, b)
}

/// Seeded random elements, identical to `vmsort gen`.
#[pyfunction]
#[pyo3(signature = (n, seed=1))]
fn gen_data(n: usize, seed: u64) -> Vec<Element> {
    vmsort::gen_data(n, seed)
}

/// Splits the first `k` outputs of merging `a` and `b`: returns `(i, j)`
/// with `i + j == k`.
#[pyfunction]
fn co_rank(a: Vec<Element>, b: Vec<Element>, k: usize) -> PyResult<(usize, usize)> {
    let p = vmsort::co_rank(&a, &b, k).map_err(value_err)?;
    Ok((p.a_split, p.b_split))
}

/// Merges sorted `data[:mid]` and `data[mid:]` with half-size scratch.
/// Returns the merged list and the scratch high-water mark.
///
/// The serial merge stashes whichever run is shorter. The vectorized one
/// needs `mid <= len - mid` and both lengths divisible by 4.
#[pyfunction]
#[pyo3(signature = (data, mid, vectorized=false))]
fn half_merge(mut data: Vec<Element>, mid: usize, vectorized: bool) -> PyResult<(Vec<Element>, usize)> {
    let mut scratch = HalfScratch::for_block(data.len());
    if vectorized {
        half_merge_vectorized::<4>(&mut data, mid, &mut scratch).map_err(value_err)?;
    } else if mid <= data.len() / 2 {
        vmsort::half_merge_serial(&mut data, mid, &mut scratch).map_err(value_err)?;
    } else {
        half_merge_serial_back(&mut data, mid, &mut scratch).map_err(value_err)?;
    }
    Ok((data, scratch.high_water()))
}

/// Merges a sorted 8-element block into a sorted 24-element carry.
#[pyfunction]
#[pyo3(signature = (a, b, variant="v1"))]
fn asym_merge_8_24(a: [Element; 8], b: [Element; 24], variant: &str) -> PyResult<Vec<Element>> {
    Ok(vmsort::asym_merge_8_24(&a, &b, parse_variant(variant)?).to_vec())
}

/// Merges sorted runs through a tree of 4-way nodes.
#[pyfunction]
#[pyo3(signature = (runs, variant="v1"))]
fn merge_runs(py: Python<'_>, runs: Vec<Vec<Element>>, variant: &str) -> PyResult<Vec<Element>> {
    let cfg = MultiwayConfig {
        variant: parse_variant(variant)?,
        ..Default::default()
    };
    let mut src = Vec::with_capacity(runs.iter().map(Vec::len).sum());
    let mut bounds = Vec::with_capacity(runs.len());
    for r in &runs {
        if r.windows(2).any(|w| w[0] > w[1]) {
            return Err(PyValueError::new_err("runs must be sorted"));
        }
        bounds.push(Run::new(src.len(), r.len()));
        src.extend_from_slice(r);
    }
    let mut out = vec![0; src.len()];
    py.detach(|| vmsort::merge_tree(&src, &bounds, &mut out, &cfg))
        .map_err(value_err)?;
    Ok(out)
}

#[pymodule]
#[pyo3(name = "vmsort")]
pub fn vmsort_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySortConfig>()?;
    m.add_class::<PySortStats>()?;
    m.add_class::<PyNetwork>()?;
    m.add_function(wrap_pyfunction!(sort, m)?)?;
    m.add_function(wrap_pyfunction!(sort_with_stats, m)?)?;
    m.add_function(wrap_pyfunction!(sort_block, m)?)?;
    m.add_function(wrap_pyfunction!(cmpx_scalar, m)?)?;
    m.add_function(wrap_pyfunction!(gen_data, m)?)?;
    m.add_function(wrap_pyfunction!(co_rank, m)?)?;
    m.add_function(wrap_pyfunction!(half_merge, m)?)?;
    m.add_function(wrap_pyfunction!(asym_merge_8_24, m)?)?;
    m.add_function(wrap_pyfunction!(merge_runs, m)?)?;
    Ok(())
}
