//! Generational node arena with the link and cut primitives.
//!
//! Children are kept in a doubly linked sibling list with handles to both
//! ends, so a loser can be attached at either end in O(1). In lazy heaps the
//! sibling pointers of roots form the circular root ring.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HeapError, Result};
use crate::key::ExtKey;
use crate::log::{
    CutCause, CutRecord, Direction, EventLog, LinkContext, LinkId, LinkRecord, Side,
};

/// Stable handle to a node. A handle whose slot has since been reused has a
/// stale generation and is rejected.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ItemId {
    index: u32,
    generation: u32,
}

impl ItemId {
    pub fn index(self) -> u32 {
        self.index
    }

    pub fn generation(self) -> u32 {
        self.generation
    }

    pub fn from_parts(index: u32, generation: u32) -> Self {
        ItemId { index, generation }
    }
}

impl fmt::Debug for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}.{}", self.index, self.generation)
    }
}

#[derive(Clone, Debug)]
pub struct Node {
    pub key: ExtKey,
    pub parent: Option<ItemId>,
    pub prev_sib: Option<ItemId>,
    pub next_sib: Option<ItemId>,
    pub first_child: Option<ItemId>,
    pub last_child: Option<ItemId>,
    /// Time of the last link this node lost.
    pub link_time: Option<u64>,
    /// The link joining this node to its parent.
    pub parent_link: Option<LinkId>,
    /// Direction of that link if it was a consolidation link.
    pub link_dir: Option<Direction>,
    /// Heap label the item was inserted into (resolved through melds by the
    /// heap layer).
    pub owner: u32,
}

impl Node {
    fn new(key: ExtKey, owner: u32) -> Self {
        Node {
            key,
            parent: None,
            prev_sib: None,
            next_sib: None,
            first_child: None,
            last_child: None,
            link_time: None,
            parent_link: None,
            link_dir: None,
            owner,
        }
    }
}

#[derive(Clone, Debug)]
struct Slot {
    generation: u32,
    node: Option<Node>,
}

/// Running totals. Comparisons involving the bottom key are not counted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub links: u64,
    pub comparisons: u64,
    pub cuts: u64,
}

#[derive(Clone, Debug)]
pub struct Arena {
    slots: Vec<Slot>,
    free: Vec<u32>,
    live: usize,
    clock: u64,
    next_link: u64,
    counters: Counters,
    log: EventLog,
}

impl Arena {
    pub fn new(record: bool) -> Self {
        Arena {
            slots: Vec::new(),
            free: Vec::new(),
            live: 0,
            clock: 0,
            next_link: 0,
            counters: Counters::default(),
            log: EventLog::new(record),
        }
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn log(&self) -> &EventLog {
        &self.log
    }

    pub(crate) fn log_mut(&mut self) -> &mut EventLog {
        &mut self.log
    }

    pub fn take_log(&mut self) -> EventLog {
        let enabled = self.log.enabled;
        std::mem::replace(&mut self.log, EventLog::new(enabled))
    }

    pub fn live(&self) -> usize {
        self.live
    }

    pub fn alloc(&mut self, key: ExtKey, owner: u32) -> ItemId {
        self.live += 1;
        let node = Node::new(key, owner);
        if let Some(index) = self.free.pop() {
            let slot = &mut self.slots[index as usize];
            slot.node = Some(node);
            ItemId {
                index,
                generation: slot.generation,
            }
        } else {
            let index = u32::try_from(self.slots.len()).expect("arena exhausted");
            self.slots.push(Slot {
                generation: 0,
                node: Some(node),
            });
            ItemId {
                index,
                generation: 0,
            }
        }
    }

    /// Frees a detached node. Its handle becomes stale.
    pub(crate) fn release(&mut self, id: ItemId) -> Result<Node> {
        self.node(id)?;
        let slot = &mut self.slots[id.index as usize];
        let node = slot.node.take().expect("checked above");
        debug_assert!(node.parent.is_none() && node.first_child.is_none());
        slot.generation = slot.generation.wrapping_add(1);
        self.free.push(id.index);
        self.live -= 1;
        Ok(node)
    }

    pub fn contains(&self, id: ItemId) -> bool {
        self.node(id).is_ok()
    }

    pub fn node(&self, id: ItemId) -> Result<&Node> {
        match self.slots.get(id.index as usize) {
            Some(Slot {
                generation,
                node: Some(node),
            }) if *generation == id.generation => Ok(node),
            _ => Err(HeapError::StaleHandle(id)),
        }
    }

    fn node_mut(&mut self, id: ItemId) -> Result<&mut Node> {
        match self.slots.get_mut(id.index as usize) {
            Some(Slot {
                generation,
                node: Some(node),
            }) if *generation == id.generation => Ok(node),
            _ => Err(HeapError::StaleHandle(id)),
        }
    }

    // Internal accessors for handles already known to be live.
    fn n(&self, id: ItemId) -> &Node {
        self.slots[id.index as usize].node.as_ref().expect("live node")
    }

    fn n_mut(&mut self, id: ItemId) -> &mut Node {
        self.slots[id.index as usize].node.as_mut().expect("live node")
    }

    pub fn key(&self, id: ItemId) -> Result<ExtKey> {
        Ok(self.node(id)?.key)
    }

    pub(crate) fn key_of(&self, id: ItemId) -> ExtKey {
        self.n(id).key
    }

    pub(crate) fn set_key(&mut self, id: ItemId, key: ExtKey) -> Result<()> {
        self.node_mut(id)?.key = key;
        Ok(())
    }

    #[cfg(test)]
    pub(crate) fn set_link_time(&mut self, id: ItemId, t: u64) {
        self.n_mut(id).link_time = Some(t);
    }

    pub fn parent(&self, id: ItemId) -> Result<Option<ItemId>> {
        Ok(self.node(id)?.parent)
    }

    pub fn is_root(&self, id: ItemId) -> Result<bool> {
        Ok(self.node(id)?.parent.is_none())
    }

    /// Children of `id`, left to right.
    pub fn children(&self, id: ItemId) -> Children<'_> {
        Children {
            arena: self,
            next: self.node(id).ok().and_then(|n| n.first_child),
        }
    }

    /// `key(a) <= key(b)`, counting one comparison unless either key is bottom.
    pub(crate) fn le(&mut self, a: ItemId, b: ItemId) -> bool {
        let (ka, kb) = (self.key_of(a), self.key_of(b));
        if !ka.is_bottom() && !kb.is_bottom() {
            self.counters.comparisons += 1;
        }
        ka <= kb
    }

    /// `key(a) < key(b)`, counted like [`Arena::le`].
    pub(crate) fn lt(&mut self, a: ItemId, b: ItemId) -> bool {
        !self.le(b, a)
    }

    /// Links two roots. The smaller key wins; on a tie `a` wins. The loser is
    /// placed at `loser_side` of the winner's child list.
    pub fn link(
        &mut self,
        a: ItemId,
        b: ItemId,
        loser_side: Side,
        context: LinkContext,
    ) -> Result<ItemId> {
        for id in [a, b] {
            if self.node(id)?.parent.is_some() {
                return Err(HeapError::NotARoot(id));
            }
        }
        if a == b {
            return Err(HeapError::SameTree);
        }
        let (winner, loser) = if self.le(a, b) { (a, b) } else { (b, a) };
        self.attach(winner, loser, loser_side, None, context);
        Ok(winner)
    }

    /// Makes `loser` a child of `winner` without comparing keys. Both must be
    /// detached roots; the caller has already decided the outcome.
    pub(crate) fn attach(
        &mut self,
        winner: ItemId,
        loser: ItemId,
        side: Side,
        direction: Option<Direction>,
        context: LinkContext,
    ) -> LinkId {
        debug_assert!(self.n(loser).parent.is_none() && self.n(winner).parent.is_none());
        debug_assert!(self.n(winner).key <= self.n(loser).key);
        self.clock += 1;
        let time = self.clock;
        let id = LinkId(self.next_link);
        self.next_link += 1;
        self.counters.links += 1;

        let (first, last) = {
            let w = self.n(winner);
            (w.first_child, w.last_child)
        };
        {
            let l = self.n_mut(loser);
            l.parent = Some(winner);
            l.link_time = Some(time);
            l.parent_link = Some(id);
            l.link_dir = direction;
            l.prev_sib = None;
            l.next_sib = None;
        }
        match side {
            Side::Leftmost => {
                self.n_mut(loser).next_sib = first;
                match first {
                    Some(f) => self.n_mut(f).prev_sib = Some(loser),
                    None => self.n_mut(winner).last_child = Some(loser),
                }
                self.n_mut(winner).first_child = Some(loser);
            }
            Side::Rightmost => {
                self.n_mut(loser).prev_sib = last;
                match last {
                    Some(l) => self.n_mut(l).next_sib = Some(loser),
                    None => self.n_mut(winner).first_child = Some(loser),
                }
                self.n_mut(winner).last_child = Some(loser);
            }
        }

        if self.log.enabled {
            self.log.links.push(LinkRecord {
                id,
                winner,
                loser,
                side,
                direction,
                context,
                time,
            });
        }
        id
    }

    /// Detaches `w` (with its subtree) from its parent.
    pub fn cut(&mut self, w: ItemId, cause: CutCause) -> Result<()> {
        let node = self.node(w)?;
        let parent = node.parent.ok_or(HeapError::AlreadyRoot(w))?;
        let (prev, next, link) = (node.prev_sib, node.next_sib, node.parent_link);
        match prev {
            Some(p) => self.n_mut(p).next_sib = next,
            None => self.n_mut(parent).first_child = next,
        }
        match next {
            Some(n) => self.n_mut(n).prev_sib = prev,
            None => self.n_mut(parent).last_child = prev,
        }
        {
            let n = self.n_mut(w);
            n.parent = None;
            n.prev_sib = None;
            n.next_sib = None;
            n.parent_link = None;
            n.link_dir = None;
        }
        self.clock += 1;
        self.counters.cuts += 1;
        if self.log.enabled {
            self.log.cuts.push(CutRecord {
                time: self.clock,
                link: link.expect("every child has a parent link"),
                cause,
            });
        }
        Ok(())
    }

    /// Cuts every child of `v`, returning them left to right.
    pub(crate) fn cut_children(&mut self, v: ItemId, cause: CutCause) -> Vec<ItemId> {
        let kids: Vec<ItemId> = self.children(v).collect();
        for &c in &kids {
            self.cut(c, cause).expect("child of a live node");
        }
        kids
    }

    // ---- root ring (lazy heaps) ----

    pub(crate) fn ring_init(&mut self, x: ItemId) {
        let n = self.n_mut(x);
        n.prev_sib = Some(x);
        n.next_sib = Some(x);
    }

    /// Inserts detached root `x` just before `anchor` in its ring.
    pub(crate) fn ring_insert_before(&mut self, anchor: ItemId, x: ItemId) {
        let prev = self.n(anchor).prev_sib.expect("ring member");
        self.n_mut(prev).next_sib = Some(x);
        self.n_mut(anchor).prev_sib = Some(x);
        let n = self.n_mut(x);
        n.prev_sib = Some(prev);
        n.next_sib = Some(anchor);
    }

    /// Catenates two rings so that the cyclic order is the ring of `a` read
    /// after `a` up to `a`, followed by the ring of `b` read the same way.
    pub(crate) fn ring_splice(&mut self, a: ItemId, b: ItemId) {
        let fa = self.n(a).next_sib.expect("ring member");
        let fb = self.n(b).next_sib.expect("ring member");
        self.n_mut(a).next_sib = Some(fb);
        self.n_mut(fb).prev_sib = Some(a);
        self.n_mut(b).next_sib = Some(fa);
        self.n_mut(fa).prev_sib = Some(b);
    }

    /// Ring members in linearization order: starting just after `anchor`
    /// and ending at `anchor`.
    pub fn ring_members(&self, anchor: ItemId) -> Vec<ItemId> {
        let mut out = Vec::new();
        let mut cur = self.n(anchor).next_sib.expect("ring member");
        loop {
            out.push(cur);
            if cur == anchor {
                break;
            }
            cur = self.n(cur).next_sib.expect("ring member");
        }
        out
    }

    /// Breaks the ring containing `anchor`, returning its members in
    /// linearization order with their sibling pointers cleared.
    pub(crate) fn ring_dissolve(&mut self, anchor: ItemId) -> Vec<ItemId> {
        let members = self.ring_members(anchor);
        for &m in &members {
            let n = self.n_mut(m);
            n.prev_sib = None;
            n.next_sib = None;
        }
        members
    }
}

pub struct Children<'a> {
    arena: &'a Arena,
    next: Option<ItemId>,
}

impl Iterator for Children<'_> {
    type Item = ItemId;

    fn next(&mut self) -> Option<ItemId> {
        let cur = self.next?;
        self.next = self.arena.n(cur).next_sib;
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(k: i64) -> ExtKey {
        ExtKey::Value(k)
    }

    fn kids(a: &Arena, id: ItemId) -> Vec<i64> {
        a.children(id).map(|c| a.key_of(c).value().unwrap()).collect()
    }

    #[test]
    fn link_smaller_wins_leftmost() {
        let mut a = Arena::new(true);
        let x = a.alloc(v(2), 0);
        let y = a.alloc(v(5), 0);
        let w = a.link(x, y, Side::Leftmost, LinkContext::Insert).unwrap();
        assert_eq!(w, x);
        assert_eq!(a.node(x).unwrap().first_child, Some(y));
        assert_eq!(a.counters().comparisons, 1);
        assert_eq!(a.log().links.len(), 1);
        assert!(a.node(y).unwrap().link_time.is_some());
    }

    #[test]
    fn link_tie_first_wins() {
        let mut a = Arena::new(false);
        let x = a.alloc(v(4), 0);
        let y = a.alloc(v(4), 0);
        assert_eq!(a.link(x, y, Side::Leftmost, LinkContext::Insert).unwrap(), x);
        let p = a.alloc(v(4), 0);
        let q = a.alloc(v(4), 0);
        assert_eq!(a.link(q, p, Side::Leftmost, LinkContext::Insert).unwrap(), q);
    }

    #[test]
    fn link_rightmost() {
        let mut a = Arena::new(false);
        let r = a.alloc(v(2), 0);
        let c1 = a.alloc(v(7), 0);
        let c2 = a.alloc(v(5), 0);
        a.link(r, c1, Side::Leftmost, LinkContext::Insert).unwrap();
        a.link(r, c2, Side::Rightmost, LinkContext::Insert).unwrap();
        assert_eq!(a.node(r).unwrap().last_child, Some(c2));
        assert_eq!(kids(&a, r), vec![7, 5]);
    }

    #[test]
    fn link_rejects_non_roots_and_stale() {
        let mut a = Arena::new(false);
        let r = a.alloc(v(1), 0);
        let c = a.alloc(v(2), 0);
        let d = a.alloc(v(3), 0);
        a.link(r, c, Side::Leftmost, LinkContext::Insert).unwrap();
        assert_eq!(
            a.link(c, d, Side::Leftmost, LinkContext::Insert),
            Err(HeapError::NotARoot(c))
        );
        assert_eq!(a.link(d, d, Side::Leftmost, LinkContext::Insert), Err(HeapError::SameTree));
        a.release(d).unwrap();
        assert_eq!(
            a.link(r, d, Side::Leftmost, LinkContext::Insert),
            Err(HeapError::StaleHandle(d))
        );
        let e = a.alloc(v(9), 0);
        assert_eq!(e.index(), d.index());
        assert!(!a.contains(d));
        assert!(a.contains(e));
    }

    #[test]
    fn cut_middle_child_repairs_chain() {
        let mut a = Arena::new(true);
        let r = a.alloc(v(0), 0);
        let cs: Vec<_> = [1, 2, 3].iter().map(|&k| a.alloc(v(k), 0)).collect();
        for &c in cs.iter().rev() {
            a.link(r, c, Side::Leftmost, LinkContext::Insert).unwrap();
        }
        assert_eq!(kids(&a, r), vec![1, 2, 3]);
        a.cut(cs[1], CutCause::DecreaseKey).unwrap();
        assert_eq!(kids(&a, r), vec![1, 3]);
        assert_eq!(a.node(cs[0]).unwrap().next_sib, Some(cs[2]));
        assert_eq!(a.node(cs[2]).unwrap().prev_sib, Some(cs[0]));
        assert!(a.is_root(cs[1]).unwrap());
        assert_eq!(a.log().cuts.len(), 1);
        assert_eq!(a.log().cuts[0].link, a.log().links[1].id);
        // ends
        a.cut(cs[0], CutCause::DecreaseKey).unwrap();
        a.cut(cs[2], CutCause::DecreaseKey).unwrap();
        assert_eq!(a.node(r).unwrap().first_child, None);
        assert_eq!(a.node(r).unwrap().last_child, None);
    }

    #[test]
    fn cut_only_child_and_subtree() {
        let mut a = Arena::new(false);
        let r = a.alloc(v(0), 0);
        let c = a.alloc(v(1), 0);
        let g = a.alloc(v(2), 0);
        a.link(c, g, Side::Leftmost, LinkContext::Insert).unwrap();
        a.link(r, c, Side::Leftmost, LinkContext::Insert).unwrap();
        a.cut(c, CutCause::DecreaseKey).unwrap();
        assert_eq!(a.children(r).count(), 0);
        assert_eq!(a.parent(g).unwrap(), Some(c));
        assert_eq!(a.cut(c, CutCause::DecreaseKey), Err(HeapError::AlreadyRoot(c)));
    }

    #[test]
    fn cut_then_relink_restores_parent() {
        let mut a = Arena::new(false);
        let r = a.alloc(v(0), 0);
        let c = a.alloc(v(5), 0);
        let d = a.alloc(v(6), 0);
        a.link(r, c, Side::Leftmost, LinkContext::Insert).unwrap();
        a.link(r, d, Side::Leftmost, LinkContext::Insert).unwrap();
        a.cut(c, CutCause::DecreaseKey).unwrap();
        a.link(r, c, Side::Rightmost, LinkContext::DecreaseKey).unwrap();
        assert_eq!(a.parent(c).unwrap(), Some(r));
        assert_eq!(a.node(r).unwrap().last_child, Some(c));
    }

    #[test]
    fn bottom_comparisons_are_free() {
        let mut a = Arena::new(false);
        let x = a.alloc(ExtKey::Bottom, 0);
        let y = a.alloc(v(1), 0);
        assert_eq!(a.link(y, x, Side::Leftmost, LinkContext::DecreaseKey).unwrap(), x);
        assert_eq!(a.counters().comparisons, 0);
    }

    #[test]
    fn ring_order() {
        let mut a = Arena::new(false);
        let ids: Vec<_> = (0..4).map(|k| a.alloc(v(k), 0)).collect();
        a.ring_init(ids[0]);
        a.ring_insert_before(ids[0], ids[1]);
        a.ring_insert_before(ids[0], ids[2]);
        assert_eq!(a.ring_members(ids[0]), vec![ids[1], ids[2], ids[0]]);
        a.ring_init(ids[3]);
        a.ring_splice(ids[0], ids[3]);
        assert_eq!(a.ring_members(ids[0]), vec![ids[3], ids[1], ids[2], ids[0]]);
        assert_eq!(a.ring_members(ids[3]), vec![ids[1], ids[2], ids[0], ids[3]]);
        let all = a.ring_dissolve(ids[3]);
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|&m| a.node(m).unwrap().next_sib.is_none()));
    }
}
