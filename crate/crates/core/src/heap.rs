//! The heap operations of the canonical framework, in eager (single tree) and
//! lazy (root ring) form, over one shared arena.
//!
//! A [`Heaps`] value owns every node of every heap it created, so melds are
//! O(1) and item handles stay valid across melds. Heaps are addressed by
//! [`HeapId`]; a heap melded into another is dead afterwards.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arena::{Arena, ItemId};
use crate::error::{HeapError, Result};
use crate::key::ExtKey;
use crate::log::{ConsolidationRecord, CutCause, LinkContext, Side};
use crate::metrics::{Metrics, OpKind};
use crate::variants::{consolidate, VariantId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Eager,
    Lazy,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Eager, Mode::Lazy];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Eager => "eager",
            Mode::Lazy => "lazy",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "eager" => Ok(Mode::Eager),
            "lazy" => Ok(Mode::Lazy),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HeapId(pub u32);

#[derive(Clone, Debug, Default)]
struct HeapSlot {
    /// Root (eager) or min-root (lazy).
    top: Option<ItemId>,
    size: usize,
    alive: bool,
}

#[derive(Clone, Debug)]
pub struct Heaps {
    arena: Arena,
    variant: VariantId,
    mode: Mode,
    heaps: Vec<HeapSlot>,
    // union-find over heap ids; melded-away heaps point at the survivor
    merged_into: Vec<u32>,
    rounds: u64,
    metrics: Metrics,
}

impl Heaps {
    /// `record` turns on the link/cut/consolidation log.
    pub fn new(variant: VariantId, mode: Mode, record: bool) -> Self {
        Heaps {
            arena: Arena::new(record),
            variant,
            mode,
            heaps: Vec::new(),
            merged_into: Vec::new(),
            rounds: 0,
            metrics: Metrics::default(),
        }
    }

    pub fn variant(&self) -> VariantId {
        self.variant
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn arena_mut(&mut self) -> &mut Arena {
        &mut self.arena
    }

    pub fn metrics(&self) -> &Metrics {
        &self.metrics
    }

    pub fn take_metrics(&mut self) -> Metrics {
        std::mem::take(&mut self.metrics)
    }

    pub fn key(&self, e: ItemId) -> Result<ExtKey> {
        self.arena.key(e)
    }

    pub fn size(&self, h: HeapId) -> Result<usize> {
        Ok(self.slot(h)?.size)
    }

    /// Root of an eager heap, or the min-root of a lazy one.
    pub fn top(&self, h: HeapId) -> Result<Option<ItemId>> {
        Ok(self.slot(h)?.top)
    }

    /// All tree roots of `h`, left to right in ring linearization order
    /// (lazy) or the single root (eager).
    pub fn roots(&self, h: HeapId) -> Result<Vec<ItemId>> {
        let slot = self.slot(h)?;
        Ok(match (slot.top, self.mode) {
            (None, _) => Vec::new(),
            (Some(r), Mode::Eager) => vec![r],
            (Some(m), Mode::Lazy) => self.arena.ring_members(m),
        })
    }

    pub fn heap_ids(&self) -> impl Iterator<Item = HeapId> + '_ {
        self.heaps
            .iter()
            .enumerate()
            .filter(|(_, s)| s.alive)
            .map(|(i, _)| HeapId(i as u32))
    }

    fn slot(&self, h: HeapId) -> Result<&HeapSlot> {
        match self.heaps.get(h.0 as usize) {
            Some(s) if s.alive => Ok(s),
            _ => Err(HeapError::UnknownHeap(h.0)),
        }
    }

    fn slot_mut(&mut self, h: HeapId) -> Result<&mut HeapSlot> {
        match self.heaps.get_mut(h.0 as usize) {
            Some(s) if s.alive => Ok(s),
            _ => Err(HeapError::UnknownHeap(h.0)),
        }
    }

    fn find(&mut self, h: u32) -> u32 {
        let mut root = h;
        while self.merged_into[root as usize] != root {
            root = self.merged_into[root as usize];
        }
        let mut cur = h;
        while self.merged_into[cur as usize] != root {
            let next = self.merged_into[cur as usize];
            self.merged_into[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn check_member(&mut self, h: HeapId, e: ItemId) -> Result<()> {
        self.slot(h)?;
        let owner = self.arena.node(e)?.owner;
        if self.find(owner) != h.0 {
            return Err(HeapError::NotInHeap(e, h.0));
        }
        Ok(())
    }

    fn record(&mut self, kind: OpKind, n: usize, before: crate::arena::Counters) {
        let after = self.arena.counters();
        self.metrics.push(
            kind,
            n,
            after.links - before.links,
            after.comparisons - before.comparisons,
            after.cuts - before.cuts,
        );
    }

    pub fn make_heap(&mut self) -> HeapId {
        let id = self.heaps.len() as u32;
        self.heaps.push(HeapSlot {
            top: None,
            size: 0,
            alive: true,
        });
        self.merged_into.push(id);
        let before = self.arena.counters();
        self.record(OpKind::MakeHeap, 0, before);
        HeapId(id)
    }

    pub fn find_min(&mut self, h: HeapId) -> Result<Option<ItemId>> {
        let slot = self.slot(h)?;
        let (top, n) = (slot.top, slot.size);
        let before = self.arena.counters();
        self.record(OpKind::FindMin, n, before);
        Ok(top)
    }

    pub fn insert(&mut self, h: HeapId, key: impl Into<ExtKey>) -> Result<ItemId> {
        let key = key.into();
        if key.is_bottom() {
            return Err(HeapError::BottomKeyInsert);
        }
        let slot = self.slot(h)?;
        let (top, n) = (slot.top, slot.size);
        let before = self.arena.counters();
        let e = self.arena.alloc(key, h.0);
        let new_top = match (top, self.mode) {
            (None, mode) => {
                if mode == Mode::Lazy {
                    self.arena.ring_init(e);
                }
                e
            }
            (Some(root), Mode::Eager) => {
                self.arena.link(root, e, Side::Leftmost, LinkContext::Insert)?
            }
            (Some(min), Mode::Lazy) => {
                self.arena.ring_insert_before(min, e);
                if self.arena.lt(e, min) {
                    e
                } else {
                    min
                }
            }
        };
        let slot = self.slot_mut(h)?;
        slot.top = Some(new_top);
        slot.size += 1;
        self.record(OpKind::Insert, n, before);
        Ok(e)
    }

    /// Melds `b` into `a`; `a` survives and `b` is dead afterwards.
    pub fn meld(&mut self, a: HeapId, b: HeapId) -> Result<HeapId> {
        if a == b {
            return Err(HeapError::SelfMeld);
        }
        let (ta, na) = {
            let s = self.slot(a)?;
            (s.top, s.size)
        };
        let (tb, nb) = {
            let s = self.slot(b)?;
            (s.top, s.size)
        };
        let before = self.arena.counters();
        let top = match (ta, tb) {
            (None, t) | (t, None) => t,
            (Some(ra), Some(rb)) => Some(match self.mode {
                Mode::Eager => self.arena.link(ra, rb, Side::Leftmost, LinkContext::Meld)?,
                Mode::Lazy => {
                    self.arena.ring_splice(ra, rb);
                    if self.arena.lt(rb, ra) {
                        rb
                    } else {
                        ra
                    }
                }
            }),
        };
        {
            let sb = self.slot_mut(b)?;
            sb.alive = false;
            sb.top = None;
            sb.size = 0;
        }
        let sa = self.slot_mut(a)?;
        sa.top = top;
        sa.size = na + nb;
        self.merged_into[b.0 as usize] = a.0;
        self.record(OpKind::Meld, na + nb, before);
        Ok(a)
    }

    pub fn decrease_key(&mut self, h: HeapId, e: ItemId, k: impl Into<ExtKey>) -> Result<()> {
        let n = self.slot(h)?.size;
        let before = self.arena.counters();
        self.decrease_key_inner(h, e, k.into())?;
        self.record(OpKind::DecreaseKey, n, before);
        Ok(())
    }

    fn decrease_key_inner(&mut self, h: HeapId, e: ItemId, k: ExtKey) -> Result<()> {
        self.check_member(h, e)?;
        if k > self.arena.key(e)? {
            return Err(HeapError::KeyIncrease(e));
        }
        self.arena.set_key(e, k)?;
        let top = self.slot(h)?.top.expect("heap holding e is nonempty");
        if e == top {
            return Ok(());
        }
        let has_parent = self.arena.parent(e)?.is_some();
        let new_top = match self.mode {
            Mode::Eager => {
                self.arena.cut(e, CutCause::DecreaseKey)?;
                self.arena.link(e, top, Side::Leftmost, LinkContext::DecreaseKey)?
            }
            Mode::Lazy => {
                if has_parent {
                    self.arena.cut(e, CutCause::DecreaseKey)?;
                    self.arena.ring_insert_before(top, e);
                }
                if self.arena.lt(e, top) {
                    e
                } else {
                    top
                }
            }
        };
        self.slot_mut(h)?.top = Some(new_top);
        Ok(())
    }

    pub fn delete_min(&mut self, h: HeapId) -> Result<(ItemId, ExtKey)> {
        let n = self.slot(h)?.size;
        let before = self.arena.counters();
        let out = self.delete_min_inner(h)?;
        self.record(OpKind::DeleteMin, n, before);
        Ok(out)
    }

    fn delete_min_inner(&mut self, h: HeapId) -> Result<(ItemId, ExtKey)> {
        let top = self.slot(h)?.top.ok_or(HeapError::EmptyHeap)?;
        let old_roots = match self.mode {
            Mode::Eager => Vec::new(),
            Mode::Lazy => {
                let mut ring = self.arena.ring_dissolve(top);
                let last = ring.pop();
                debug_assert_eq!(last, Some(top));
                ring
            }
        };
        let children = self.arena.cut_children(top, CutCause::DeleteMin);
        let old = old_roots.len();
        let mut roots = old_roots;
        roots.extend(children);

        let round = self.rounds;
        self.rounds += 1;
        let before = self.arena.counters();
        let snapshot: Option<Vec<(ItemId, ExtKey)>> = self
            .arena
            .log()
            .enabled
            .then(|| roots.iter().map(|&r| (r, self.arena.key_of(r))).collect());
        let new_top = consolidate(&mut self.arena, self.variant, &roots, round);
        if let Some(roots) = snapshot {
            let after = self.arena.counters();
            self.arena.log_mut().consolidations.push(ConsolidationRecord {
                round,
                roots,
                old_roots: old,
                links: after.links - before.links,
                comparisons: after.comparisons - before.comparisons,
            });
        }
        if let (Some(r), Mode::Lazy) = (new_top, self.mode) {
            self.arena.ring_init(r);
        }
        let key = self.arena.key_of(top);
        self.arena.release(top)?;
        let slot = self.slot_mut(h)?;
        slot.top = new_top;
        slot.size -= 1;
        Ok((top, key))
    }

    /// Removes `e`: decrease-key to bottom followed by delete-min.
    pub fn delete(&mut self, h: HeapId, e: ItemId) -> Result<()> {
        let n = self.slot(h)?.size;
        let before = self.arena.counters();
        self.decrease_key_inner(h, e, ExtKey::Bottom)?;
        let (gone, _) = self.delete_min_inner(h)?;
        debug_assert_eq!(gone, e);
        self.record(OpKind::Delete, n, before);
        Ok(())
    }
}
