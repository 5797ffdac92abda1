//! Python bindings: a multi-heap handle plus trace, verification and
//! Dijkstra helpers.

use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;

use selfheap::graph::{parse_dimacs, reference_dijkstra, run_dijkstra};
use selfheap::trace::{self, gen_random_trace, gen_sorting_trace, parse_trace, serialize_trace, ReplayOptions};
use selfheap::verify::{check_lemmas, compare_outputs, oracle_replay};
use selfheap::{HeapId, ItemId, Mode, VariantId};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_config(variant: &str, mode: &str) -> PyResult<(VariantId, Mode)> {
    Ok((variant.parse().map_err(value_err)?, mode.parse().map_err(value_err)?))
}

/// A set of heaps of one variant. Heaps and items are named by the integer
/// labels returned from `make_heap` and `insert`.
///
///     hs = Heaps("smooth", "lazy")
///     h = hs.make_heap()
///     a = hs.insert(h, 5)
///     hs.decrease_key(h, a, 1)
///     hs.delete_min(h)  # (a, 1)
#[pyclass(unsendable)]
struct Heaps {
    inner: selfheap::Heaps,
    heaps: Vec<HeapId>,
    items: Vec<ItemId>,
}

impl Heaps {
    fn heap(&self, h: usize) -> PyResult<HeapId> {
        self.heaps
            .get(h)
            .copied()
            .ok_or_else(|| PyIndexError::new_err(format!("no heap {h}")))
    }

    fn item(&self, e: usize) -> PyResult<ItemId> {
        self.items
            .get(e)
            .copied()
            .ok_or_else(|| PyIndexError::new_err(format!("no item {e}")))
    }

    fn label(&self, e: ItemId) -> usize {
        self.items.iter().rposition(|&x| x == e).expect("item was inserted here")
    }
}

#[pymethods]
impl Heaps {
    #[new]
    #[pyo3(signature = (variant="smooth", mode="eager"))]
    fn new(variant: &str, mode: &str) -> PyResult<Self> {
        let (v, m) = parse_config(variant, mode)?;
        Ok(Heaps {
            inner: selfheap::Heaps::new(v, m, false),
            heaps: Vec::new(),
            items: Vec::new(),
        })
    }

    fn make_heap(&mut self) -> usize {
        self.heaps.push(self.inner.make_heap());
        self.heaps.len() - 1
    }

    fn insert(&mut self, h: usize, key: i64) -> PyResult<usize> {
        let e = self.inner.insert(self.heap(h)?, key).map_err(value_err)?;
        self.items.push(e);
        Ok(self.items.len() - 1)
    }

    /// `(item, key)` of a minimum, or `None` for an empty heap.
    fn find_min(&mut self, h: usize) -> PyResult<Option<(usize, i64)>> {
        let Some(e) = self.inner.find_min(self.heap(h)?).map_err(value_err)? else {
            return Ok(None);
        };
        let key = self.inner.key(e).map_err(value_err)?.value().expect("live keys are finite");
        Ok(Some((self.label(e), key)))
    }

    fn delete_min(&mut self, h: usize) -> PyResult<(usize, i64)> {
        let (e, key) = self.inner.delete_min(self.heap(h)?).map_err(value_err)?;
        Ok((self.label(e), key.value().expect("live keys are finite")))
    }

    /// Moves every item of `other` into `h`; `other` becomes unusable.
    fn meld(&mut self, h: usize, other: usize) -> PyResult<()> {
        self.inner.meld(self.heap(h)?, self.heap(other)?).map_err(value_err)?;
        Ok(())
    }

    fn decrease_key(&mut self, h: usize, item: usize, key: i64) -> PyResult<()> {
        self.inner
            .decrease_key(self.heap(h)?, self.item(item)?, key)
            .map_err(value_err)
    }

    fn delete(&mut self, h: usize, item: usize) -> PyResult<()> {
        self.inner.delete(self.heap(h)?, self.item(item)?).map_err(value_err)
    }

    fn size(&self, h: usize) -> PyResult<usize> {
        self.inner.size(self.heap(h)?).map_err(value_err)
    }

    /// Total `(links, comparisons)` so far.
    fn cost(&self) -> (u64, u64) {
        let m = self.inner.metrics();
        (m.links, m.comparisons)
    }
}

/// Sorting trace text: n shuffled inserts, then n delete-mins.
#[pyfunction]
#[pyo3(signature = (n, seed=0))]
fn sorting_trace(n: usize, seed: u64) -> String {
    serialize_trace(&gen_sorting_trace(n, seed))
}

/// Random trace text with insert:delete-min:decrease-key weights `mix`.
#[pyfunction]
#[pyo3(signature = (n_ops, seed=0, mix=(5.0, 3.0, 2.0), meld=0.0, delete=0.0, heaps=1))]
fn random_trace(n_ops: usize, seed: u64, mix: (f64, f64, f64), meld: f64, delete: f64, heaps: usize) -> PyResult<String> {
    let cfg = trace::RandomConfig {
        weights: trace::MixWeights {
            meld,
            delete,
            ..trace::MixWeights::idk(mix.0, mix.1, mix.2)
        },
        n_ops,
        n_heaps: heaps,
        ..Default::default()
    };
    Ok(serialize_trace(&gen_random_trace(&cfg, seed).map_err(value_err)?))
}

/// Replays trace text. Returns the find-min/delete-min keys (`None` for an
/// empty find-min) and the total link count.
#[pyfunction]
#[pyo3(signature = (text, variant="smooth", mode="eager"))]
fn replay(text: &str, variant: &str, mode: &str) -> PyResult<(Vec<Option<i64>>, u64)> {
    let (v, m) = parse_config(variant, mode)?;
    let t = parse_trace(text).map_err(value_err)?;
    let r = trace::replay(&t, v, m, ReplayOptions::default()).map_err(value_err)?;
    Ok((r.outputs.iter().map(|o| o.key).collect(), r.metrics.links))
}

/// Checks one configuration against the oracle and the link lemmas.
/// Returns `(passed, report_text)`.
#[pyfunction]
#[pyo3(signature = (text, variant="smooth", mode="eager"))]
fn verify(text: &str, variant: &str, mode: &str) -> PyResult<(bool, String)> {
    let (v, m) = parse_config(variant, mode)?;
    let t = parse_trace(text).map_err(value_err)?;
    let oracle = oracle_replay(&t).map_err(value_err)?;
    let r = trace::replay(&t, v, m, ReplayOptions { record: true }).map_err(value_err)?;
    let report = check_lemmas(&t, &r, v).map_err(value_err)?;
    let (oracle_ok, head) = match compare_outputs(&r.outputs, &oracle) {
        Ok(()) => (true, "ORACLE PASS".to_string()),
        Err(msg) => (false, format!("ORACLE FAIL {msg}")),
    };
    Ok((oracle_ok && report.passed(), format!("{head}\n{report}")))
}

/// Distances from `source` in DIMACS graph text; `None` marks unreachable.
#[pyfunction]
#[pyo3(signature = (text, source=1, variant="smooth", mode="eager", check=false))]
fn dijkstra(text: &str, source: u32, variant: &str, mode: &str, check: bool) -> PyResult<Vec<Option<u64>>> {
    let (v, m) = parse_config(variant, mode)?;
    let g = parse_dimacs(text).map_err(value_err)?;
    let dist = run_dijkstra(&g, source, v, m).map_err(value_err)?.dist;
    if check && dist != reference_dijkstra(&g, source).map_err(value_err)? {
        return Err(PyValueError::new_err("distances differ from the reference"));
    }
    Ok(dist)
}

#[pymodule]
fn selfheap_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Heaps>()?;
    m.add_function(wrap_pyfunction!(sorting_trace, m)?)?;
    m.add_function(wrap_pyfunction!(random_trace, m)?)?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(dijkstra, m)?)?;
    Ok(())
}
