//! Link, cut and consolidation records emitted by the arena.

use serde::{Deserialize, Serialize};

use crate::arena::ItemId;
use crate::key::ExtKey;

/// Sequence number of a link, unique within one arena.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinkId(pub u64);

/// Where the loser goes in the winner's child list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Leftmost,
    Rightmost,
}

/// Position of a consolidation link's loser relative to its winner on the
/// root list just before the link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Left,
    Right,
}

/// Stage of a consolidation that produced a link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    /// The i-th pairing pass, starting at 1.
    Pass(u32),
    /// Right-to-left assembly of the two-pass pairing heap.
    Assembly,
    /// Leftmost locally maximum linking scan.
    Scan,
}

/// The operation a link was done for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinkContext {
    Insert,
    Meld,
    DecreaseKey,
    /// A link done while consolidating the root list of delete-min number `round`.
    Consolidate { round: u64, phase: Phase },
}

impl LinkContext {
    pub fn round(self) -> Option<u64> {
        match self {
            LinkContext::Consolidate { round, .. } => Some(round),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkRecord {
    pub id: LinkId,
    pub winner: ItemId,
    pub loser: ItemId,
    pub side: Side,
    /// Set only for consolidation links.
    pub direction: Option<Direction>,
    pub context: LinkContext,
    pub time: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CutCause {
    DecreaseKey,
    DeleteMin,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutRecord {
    pub time: u64,
    pub link: LinkId,
    pub cause: CutCause,
}

/// Snapshot of one delete-min consolidation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsolidationRecord {
    pub round: u64,
    /// Root list before any link, left to right, with the keys at that time.
    pub roots: Vec<(ItemId, ExtKey)>,
    /// Number of leading entries of `roots` that were already roots before
    /// the delete-min (lazy mode only; zero for eager heaps).
    pub old_roots: usize,
    pub links: u64,
    pub comparisons: u64,
}

/// In-memory event log. Recording can be switched off for large benchmarks;
/// link ids are assigned either way.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct EventLog {
    pub enabled: bool,
    pub links: Vec<LinkRecord>,
    pub cuts: Vec<CutRecord>,
    pub consolidations: Vec<ConsolidationRecord>,
}

impl EventLog {
    pub fn new(enabled: bool) -> Self {
        EventLog {
            enabled,
            ..Default::default()
        }
    }

    /// Look up a link by id. Ids are dense, so this is an index when logging
    /// has been on since the arena was created.
    pub fn link(&self, id: LinkId) -> Option<&LinkRecord> {
        self.links
            .get(id.0 as usize)
            .filter(|r| r.id == id)
            .or_else(|| self.links.iter().find(|r| r.id == id))
    }
}
