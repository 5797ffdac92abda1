use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Op, Trace};
use crate::arena::ItemId;
use crate::error::HeapError;
use crate::heap::{HeapId, Heaps, Mode};
use crate::log::{ConsolidationRecord, CutRecord, LinkRecord};
use crate::metrics::Metrics;
use crate::variants::VariantId;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReplayOptions {
    /// Keep the link/cut/consolidation log.
    pub record: bool,
}

/// Result of a find-min or delete-min, tagged with the op index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Output {
    pub op: usize,
    pub item: Option<u32>,
    pub key: Option<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReplayResult {
    pub outputs: Vec<Output>,
    pub metrics: Metrics,
    pub links: Vec<LinkRecord>,
    pub cuts: Vec<CutRecord>,
    pub consolidations: Vec<ConsolidationRecord>,
    /// Arena handle of each item label.
    pub items: Vec<ItemId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("op {op}: {source}")]
    Heap {
        op: usize,
        #[source]
        source: HeapError,
    },
    #[error("op {op}: unknown {what} label {label}")]
    Label { op: usize, what: &'static str, label: u32 },
}

/// Runs a trace one op at a time against a [`Heaps`] instance.
pub struct Replayer {
    heaps: Heaps,
    heap_ids: Vec<HeapId>,
    items: Vec<ItemId>,
    labels: HashMap<ItemId, u32>,
    outputs: Vec<Output>,
    step: usize,
}

impl Replayer {
    pub fn new(variant: VariantId, mode: Mode, opts: ReplayOptions) -> Self {
        Replayer {
            heaps: Heaps::new(variant, mode, opts.record),
            heap_ids: Vec::new(),
            items: Vec::new(),
            labels: HashMap::new(),
            outputs: Vec::new(),
            step: 0,
        }
    }

    pub fn heaps(&self) -> &Heaps {
        &self.heaps
    }

    pub fn heap_id(&self, label: u32) -> Option<HeapId> {
        self.heap_ids.get(label as usize).copied()
    }

    pub fn item(&self, label: u32) -> Option<ItemId> {
        self.items.get(label as usize).copied()
    }

    pub fn outputs(&self) -> &[Output] {
        &self.outputs
    }

    fn h(&self, label: u32) -> Result<HeapId, ReplayError> {
        self.heap_id(label).ok_or(ReplayError::Label {
            op: self.step,
            what: "heap",
            label,
        })
    }

    fn i(&self, label: u32) -> Result<ItemId, ReplayError> {
        self.item(label).ok_or(ReplayError::Label {
            op: self.step,
            what: "item",
            label,
        })
    }

    fn output(&mut self, e: Option<ItemId>, key: Option<i64>) -> Output {
        let out = Output {
            op: self.step,
            item: e.and_then(|e| self.labels.get(&e).copied()),
            key,
        };
        self.outputs.push(out);
        out
    }

    /// Executes the next op. Returns the output of find-min and delete-min.
    pub fn step(&mut self, op: &Op) -> Result<Option<Output>, ReplayError> {
        let at = self.step;
        let heap_err = |source| ReplayError::Heap { op: at, source };
        let out = match *op {
            Op::MakeHeap => {
                let id = self.heaps.make_heap();
                self.heap_ids.push(id);
                None
            }
            Op::Insert { heap, item, key } => {
                let h = self.h(heap)?;
                if item as usize != self.items.len() {
                    return Err(ReplayError::Label {
                        op: at,
                        what: "item",
                        label: item,
                    });
                }
                let e = self.heaps.insert(h, key).map_err(heap_err)?;
                self.items.push(e);
                self.labels.insert(e, item);
                None
            }
            Op::FindMin { heap } => {
                let h = self.h(heap)?;
                let top = self.heaps.find_min(h).map_err(heap_err)?;
                let key = match top {
                    Some(e) => self.heaps.key(e).map_err(heap_err)?.value(),
                    None => None,
                };
                Some(self.output(top, key))
            }
            Op::DeleteMin { heap } => {
                let h = self.h(heap)?;
                let (e, key) = self.heaps.delete_min(h).map_err(heap_err)?;
                let out = self.output(Some(e), key.value());
                self.labels.remove(&e);
                Some(out)
            }
            Op::Meld { heap, other } => {
                let (a, b) = (self.h(heap)?, self.h(other)?);
                self.heaps.meld(a, b).map_err(heap_err)?;
                None
            }
            Op::DecreaseKey { heap, item, key } => {
                let (h, e) = (self.h(heap)?, self.i(item)?);
                self.heaps.decrease_key(h, e, key).map_err(heap_err)?;
                None
            }
            Op::Delete { heap, item } => {
                let (h, e) = (self.h(heap)?, self.i(item)?);
                self.heaps.delete(h, e).map_err(heap_err)?;
                self.labels.remove(&e);
                None
            }
        };
        self.step += 1;
        Ok(out)
    }

    pub fn finish(mut self) -> ReplayResult {
        let log = self.heaps.arena_mut().take_log();
        ReplayResult {
            outputs: self.outputs,
            metrics: self.heaps.take_metrics(),
            links: log.links,
            cuts: log.cuts,
            consolidations: log.consolidations,
            items: self.items,
        }
    }
}

pub fn replay(
    trace: &Trace,
    variant: VariantId,
    mode: Mode,
    opts: ReplayOptions,
) -> Result<ReplayResult, ReplayError> {
    replay_with(trace, variant, mode, opts, |_, _, _| {})
}

/// Like [`replay`], calling `hook(op_index, op, replayer)` after every op.
pub fn replay_with<F>(
    trace: &Trace,
    variant: VariantId,
    mode: Mode,
    opts: ReplayOptions,
    mut hook: F,
) -> Result<ReplayResult, ReplayError>
where
    F: FnMut(usize, &Op, &Replayer),
{
    let mut r = Replayer::new(variant, mode, opts);
    for (i, op) in trace.ops.iter().enumerate() {
        r.step(op)?;
        hook(i, op, &r);
    }
    Ok(r.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{gen_sorting_trace, parse_trace};

    #[test]
    fn sorting_outputs_sorted() {
        let t = gen_sorting_trace(200, 3);
        for v in VariantId::ALL {
            for m in Mode::ALL {
                let r = replay(&t, v, m, ReplayOptions::default()).unwrap();
                let keys: Vec<i64> = r.outputs.iter().map(|o| o.key.unwrap()).collect();
                assert_eq!(keys, (1..=200).collect::<Vec<_>>(), "{v} {m}");
            }
        }
    }

    #[test]
    fn outputs_name_item_labels() {
        let t = parse_trace("H\nI 0 0 5\nI 0 1 3\nF 0\nK 0 0 1\nD 0\nD 0\nF 0\n").unwrap();
        let r = replay(&t, VariantId::Smooth, Mode::Lazy, ReplayOptions::default()).unwrap();
        let got: Vec<(Option<u32>, Option<i64>)> = r.outputs.iter().map(|o| (o.item, o.key)).collect();
        assert_eq!(
            got,
            vec![(Some(1), Some(3)), (Some(0), Some(1)), (Some(1), Some(3)), (None, None)]
        );
    }

    #[test]
    fn heap_error_is_reported_with_op() {
        let t = Trace {
            ops: vec![Op::MakeHeap, Op::DeleteMin { heap: 0 }],
            ..Default::default()
        };
        let e = replay(&t, VariantId::Pairing, Mode::Eager, ReplayOptions::default()).unwrap_err();
        assert_eq!(
            e,
            ReplayError::Heap {
                op: 1,
                source: HeapError::EmptyHeap
            }
        );
    }

    #[test]
    fn record_collects_log() {
        let t = gen_sorting_trace(20, 1);
        let r = replay(&t, VariantId::Slim, Mode::Eager, ReplayOptions { record: true }).unwrap();
        assert_eq!(r.consolidations.len(), 20);
        assert_eq!(r.links.len() as u64, r.metrics.links);
        let r = replay(&t, VariantId::Slim, Mode::Eager, ReplayOptions::default()).unwrap();
        assert!(r.links.is_empty());
    }
}
