use thiserror::Error;

use crate::arena::ItemId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeapError {
    #[error("stale or unknown item handle {0:?}")]
    StaleHandle(ItemId),
    #[error("item {0:?} is not a root")]
    NotARoot(ItemId),
    #[error("item {0:?} is already a root")]
    AlreadyRoot(ItemId),
    #[error("cannot link an item with itself")]
    SameTree,
    #[error("the bottom key is reserved for delete")]
    BottomKeyInsert,
    #[error("decrease-key would increase the key of {0:?}")]
    KeyIncrease(ItemId),
    #[error("heap is empty")]
    EmptyHeap,
    #[error("a heap cannot be melded with itself")]
    SelfMeld,
    #[error("heap {0} does not exist or was melded away")]
    UnknownHeap(u32),
    #[error("item {0:?} does not belong to heap {1}")]
    NotInHeap(ItemId, u32),
}

pub type Result<T, E = HeapError> = std::result::Result<T, E>;
