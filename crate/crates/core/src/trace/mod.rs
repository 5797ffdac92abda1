//! Operation traces: the op model, a validating state machine, generators,
//! the line-oriented text format and replay against any heap variant.
//!
//! Heaps and items are named by dense labels assigned in creation order. A
//! meld keeps the first heap's label; the second label is dead afterwards.
//!
//! Duplicate keys are allowed. When a delete-min finds several items tied
//! for the minimum, which one is removed is up to the heap, so every item
//! tied at that moment becomes *pinned*: it stays in the multiset but may no
//! longer be the target of a decrease-key or delete.

mod gen;
mod replay;
mod text;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use gen::{gen_random_trace, gen_sorting_trace, GenError, MixWeights, RandomConfig};
pub use replay::{replay, replay_with, Output, ReplayError, ReplayOptions, ReplayResult, Replayer};
pub use text::{parse_trace, serialize_trace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Op {
    MakeHeap,
    Insert { heap: u32, item: u32, key: i64 },
    FindMin { heap: u32 },
    DeleteMin { heap: u32 },
    /// Melds `other` into `heap`.
    Meld { heap: u32, other: u32 },
    DecreaseKey { heap: u32, item: u32, key: i64 },
    Delete { heap: u32, item: u32 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub ops: Vec<Op>,
    pub seed: u64,
    /// Generator name and parameters; single line.
    pub meta: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {msg}")]
    Semantic { line: usize, msg: String },
    #[error("op {op}: {msg}")]
    Invalid { op: usize, msg: String },
}

#[derive(Clone, Debug)]
struct HeapModel {
    alive: bool,
    set: BTreeSet<(i64, u32)>,
}

#[derive(Clone, Debug)]
struct ItemModel {
    key: i64,
    heap: u32,
    live: bool,
    pinned: bool,
}

/// Label-level state of a trace prefix: which heaps and items exist, their
/// keys and membership. Used both to validate and to generate traces.
#[derive(Clone, Debug, Default)]
pub struct TraceModel {
    heaps: Vec<HeapModel>,
    merged_into: Vec<u32>,
    items: Vec<ItemModel>,
    // live, unpinned items; swap-remove with back-pointers
    touchable: Vec<u32>,
    slot: Vec<usize>,
    live_heaps: Vec<u32>,
}

const NO_SLOT: usize = usize::MAX;

impl TraceModel {
    pub fn new() -> Self {
        Self::default()
    }

    fn find(&self, mut h: u32) -> u32 {
        while self.merged_into[h as usize] != h {
            h = self.merged_into[h as usize];
        }
        h
    }

    fn heap(&self, h: u32) -> Result<&HeapModel, String> {
        match self.heaps.get(h as usize) {
            Some(m) if m.alive => Ok(m),
            Some(_) => Err(format!("heap {h} was melded away")),
            None => Err(format!("heap {h} does not exist")),
        }
    }

    fn item(&self, h: u32, i: u32) -> Result<&ItemModel, String> {
        self.heap(h)?;
        let it = self
            .items
            .get(i as usize)
            .ok_or_else(|| format!("item {i} does not exist"))?;
        if !it.live {
            return Err(format!("item {i} was deleted"));
        }
        if it.pinned {
            return Err(format!("item {i} was tied at a delete-min and may not be referenced"));
        }
        if self.find(it.heap) != h {
            return Err(format!("item {i} is not in heap {h}"));
        }
        Ok(it)
    }

    fn untouch(&mut self, i: u32) {
        let s = self.slot[i as usize];
        if s == NO_SLOT {
            return;
        }
        let last = *self.touchable.last().expect("nonempty");
        self.touchable.swap_remove(s);
        if last != i {
            self.slot[last as usize] = s;
        }
        self.slot[i as usize] = NO_SLOT;
    }

    pub fn next_heap_label(&self) -> u32 {
        self.heaps.len() as u32
    }

    pub fn next_item_label(&self) -> u32 {
        self.items.len() as u32
    }

    pub fn live_heaps(&self) -> &[u32] {
        &self.live_heaps
    }

    pub fn heap_len(&self, h: u32) -> usize {
        self.heaps.get(h as usize).map_or(0, |m| m.set.len())
    }

    /// Live items that may still be referenced.
    pub fn touchable(&self) -> &[u32] {
        &self.touchable
    }

    /// Current key and heap of an item.
    pub fn item_state(&self, i: u32) -> Option<(i64, u32)> {
        let it = self.items.get(i as usize)?;
        it.live.then(|| (it.key, self.find(it.heap)))
    }

    /// Applies `op` if it is valid for the current state.
    pub fn apply(&mut self, op: &Op) -> Result<(), String> {
        match *op {
            Op::MakeHeap => {
                let h = self.heaps.len() as u32;
                self.heaps.push(HeapModel {
                    alive: true,
                    set: BTreeSet::new(),
                });
                self.merged_into.push(h);
                self.live_heaps.push(h);
            }
            Op::Insert { heap, item, key } => {
                self.heap(heap)?;
                if item != self.next_item_label() {
                    return Err(format!(
                        "item label {item} out of order; expected {}",
                        self.next_item_label()
                    ));
                }
                self.items.push(ItemModel {
                    key,
                    heap,
                    live: true,
                    pinned: false,
                });
                self.slot.push(self.touchable.len());
                self.touchable.push(item);
                self.heaps[heap as usize].set.insert((key, item));
            }
            Op::FindMin { heap } => {
                self.heap(heap)?;
            }
            Op::DeleteMin { heap } => {
                let set = &self.heap(heap)?.set;
                let &(k, first) = set.iter().next().ok_or("delete-min on an empty heap")?;
                let tied: Vec<u32> = set
                    .range((k, 0)..=(k, u32::MAX))
                    .map(|&(_, i)| i)
                    .collect();
                if tied.len() > 1 {
                    for &i in &tied {
                        self.items[i as usize].pinned = true;
                        self.untouch(i);
                    }
                }
                self.heaps[heap as usize].set.remove(&(k, first));
                self.items[first as usize].live = false;
                self.untouch(first);
            }
            Op::Meld { heap, other } => {
                self.heap(heap)?;
                self.heap(other)?;
                if heap == other {
                    return Err(format!("heap {heap} melded with itself"));
                }
                let mut moved = std::mem::take(&mut self.heaps[other as usize].set);
                self.heaps[other as usize].alive = false;
                self.heaps[heap as usize].set.append(&mut moved);
                self.merged_into[other as usize] = heap;
                self.live_heaps.retain(|&h| h != other);
            }
            Op::DecreaseKey { heap, item, key } => {
                let old = self.item(heap, item)?.key;
                if key > old {
                    return Err(format!("decrease-key of item {item} from {old} to {key} increases it"));
                }
                let set = &mut self.heaps[heap as usize].set;
                set.remove(&(old, item));
                set.insert((key, item));
                self.items[item as usize].key = key;
            }
            Op::Delete { heap, item } => {
                let key = self.item(heap, item)?.key;
                self.heaps[heap as usize].set.remove(&(key, item));
                self.items[item as usize].live = false;
                self.untouch(item);
            }
        }
        Ok(())
    }
}

/// Checks that every op is valid in sequence.
pub fn validate(ops: &[Op]) -> Result<(), TraceError> {
    let mut model = TraceModel::new();
    for (i, op) in ops.iter().enumerate() {
        model
            .apply(op)
            .map_err(|msg| TraceError::Invalid { op: i, msg })?;
    }
    Ok(())
}
