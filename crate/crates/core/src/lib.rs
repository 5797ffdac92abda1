//! Self-adjusting heaps: pairing, multipass pairing, slim and smooth heaps in
//! eager (single tree) and lazy (root ring) form, with link/cut logging,
//! operation traces, a sorted-multiset oracle, structural and link-class
//! checkers, amortized-cost metrics and a Dijkstra harness.

pub mod arena;
pub mod bench;
pub mod error;
pub mod graph;
pub mod heap;
pub mod key;
pub mod log;
pub mod metrics;
pub mod trace;
pub mod variants;
pub mod verify;

pub use arena::{Arena, ItemId};
pub use error::HeapError;
pub use heap::{HeapId, Heaps, Mode};
pub use key::ExtKey;
pub use log::{CutCause, Direction, LinkContext, LinkId, LinkRecord, Phase, Side};
pub use metrics::{GrowthFit, GrowthModel, Metrics, OpKind};
pub use variants::{Placement, VariantId};
