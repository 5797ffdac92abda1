//! Root-list consolidation for the four linking disciplines.
//!
//! Every discipline links only adjacent roots and leaves the winner in the
//! loser's neighbor position, so each consolidation of `r` roots does exactly
//! `r - 1` links. Consolidation links carry a [`Direction`]: `Left` when the
//! loser sat left of the winner on the root list, `Right` otherwise.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arena::{Arena, ItemId};
use crate::log::{Direction, LinkContext, Phase, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VariantId {
    Pairing,
    Multipass,
    Slim,
    Smooth,
}

impl VariantId {
    pub const ALL: [VariantId; 4] = [
        VariantId::Pairing,
        VariantId::Multipass,
        VariantId::Slim,
        VariantId::Smooth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VariantId::Pairing => "pairing",
            VariantId::Multipass => "multipass",
            VariantId::Slim => "slim",
            VariantId::Smooth => "smooth",
        }
    }

    /// Slim and smooth heaps use leftmost locally maximum linking.
    pub fn is_locally_max(self) -> bool {
        matches!(self, VariantId::Slim | VariantId::Smooth)
    }
}

impl fmt::Display for VariantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VariantId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pairing" => Ok(VariantId::Pairing),
            "multipass" => Ok(VariantId::Multipass),
            "slim" => Ok(VariantId::Slim),
            "smooth" => Ok(VariantId::Smooth),
            other => Err(format!("unknown variant `{other}`")),
        }
    }
}

/// Child-list placement of consolidation losers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    /// Loser always becomes the leftmost child.
    OneSided,
    /// Loser keeps its side: leftmost on a left link, rightmost on a right link.
    Stable,
}

impl Placement {
    fn side(self, dir: Direction) -> Side {
        match (self, dir) {
            (Placement::Stable, Direction::Right) => Side::Rightmost,
            _ => Side::Leftmost,
        }
    }
}

/// Links `winner` and `loser`, where the outcome is already known. `dir` is
/// the loser's position relative to the winner.
fn join(
    arena: &mut Arena,
    winner: ItemId,
    loser: ItemId,
    dir: Direction,
    placement: Placement,
    round: u64,
    phase: Phase,
) -> ItemId {
    arena.attach(
        winner,
        loser,
        placement.side(dir),
        Some(dir),
        LinkContext::Consolidate { round, phase },
    );
    winner
}

/// Links two adjacent roots with one comparison; the left root wins ties.
fn link_adjacent(
    arena: &mut Arena,
    left: ItemId,
    right: ItemId,
    round: u64,
    phase: Phase,
) -> ItemId {
    if arena.le(left, right) {
        join(arena, left, right, Direction::Right, Placement::OneSided, round, phase)
    } else {
        join(arena, right, left, Direction::Left, Placement::OneSided, round, phase)
    }
}

/// One pairing pass: links roots 0-1, 2-3, ...; an odd last root is carried.
fn pairing_pass(arena: &mut Arena, roots: &[ItemId], round: u64, pass: u32) -> Vec<ItemId> {
    let mut out = Vec::with_capacity(roots.len().div_ceil(2));
    for pair in roots.chunks(2) {
        match *pair {
            [l, r] => out.push(link_adjacent(arena, l, r, round, Phase::Pass(pass))),
            [l] => out.push(l),
            _ => unreachable!(),
        }
    }
    out
}

/// Classic pairing heap: one pairing pass, then right-to-left assembly.
pub fn two_pass_consolidate(arena: &mut Arena, roots: &[ItemId], round: u64) -> Option<ItemId> {
    let mut paired = pairing_pass(arena, roots, round, 1);
    let mut acc = paired.pop()?;
    while let Some(left) = paired.pop() {
        acc = link_adjacent(arena, left, acc, round, Phase::Assembly);
    }
    Some(acc)
}

/// Repeated pairing passes until one root is left.
pub fn multipass_consolidate(arena: &mut Arena, roots: &[ItemId], round: u64) -> Option<ItemId> {
    if roots.is_empty() {
        return None;
    }
    let mut list = roots.to_vec();
    let mut pass = 1;
    while list.len() > 1 {
        list = pairing_pass(arena, &list, round, pass);
        pass += 1;
    }
    Some(list[0])
}

/// Leftmost locally maximum linking with bottom sentinels at both ends.
///
/// The roots left of the current root are kept on a stack; they are strictly
/// increasing and all smaller than the current root, so the current root is a
/// local maximum exactly when it is at least its right neighbor. A link with
/// the left neighbor leaves the winner known to be at least the right
/// neighbor, so that comparison is not repeated. Total counted comparisons
/// never exceed twice the number of links.
pub fn locally_max_consolidate(
    arena: &mut Arena,
    roots: &[ItemId],
    placement: Placement,
    round: u64,
) -> Option<ItemId> {
    let (&first, rest) = roots.split_first()?;
    let mut stack: Vec<ItemId> = Vec::with_capacity(roots.len());
    let mut cur = first;
    let mut next = 0usize;
    // true when cur >= right neighbor is already established
    let mut ge_right = false;
    loop {
        let right = rest.get(next).copied();
        let left = stack.last().copied();
        if left.is_none() && right.is_none() {
            return Some(cur);
        }
        if !ge_right {
            if let Some(w) = right {
                if !arena.le(w, cur) {
                    // cur < right: not a local maximum, move right
                    stack.push(cur);
                    cur = w;
                    next += 1;
                    continue;
                }
            }
        }
        // cur is a local maximum; link it with the larger neighbor (left on ties)
        let take_left = match (left, right) {
            (Some(u), Some(w)) => arena.le(w, u),
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => unreachable!(),
        };
        if take_left {
            let u = stack.pop().expect("left neighbor");
            cur = join(arena, u, cur, Direction::Right, placement, round, Phase::Scan);
            // u >= right was just compared (or right is a sentinel)
            ge_right = true;
        } else {
            let w = right.expect("right neighbor");
            next += 1;
            cur = join(arena, w, cur, Direction::Left, placement, round, Phase::Scan);
            ge_right = false;
        }
    }
}

/// Consolidates `roots` (left to right) with the discipline of `variant`.
pub fn consolidate(
    arena: &mut Arena,
    variant: VariantId,
    roots: &[ItemId],
    round: u64,
) -> Option<ItemId> {
    match variant {
        VariantId::Pairing => two_pass_consolidate(arena, roots, round),
        VariantId::Multipass => multipass_consolidate(arena, roots, round),
        VariantId::Slim => locally_max_consolidate(arena, roots, Placement::OneSided, round),
        VariantId::Smooth => locally_max_consolidate(arena, roots, Placement::Stable, round),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::key::ExtKey;
    use crate::log::LinkRecord;

    fn setup(keys: &[i64]) -> (Arena, Vec<ItemId>) {
        let mut a = Arena::new(true);
        let ids = keys.iter().map(|&k| a.alloc(ExtKey::Value(k), 0)).collect();
        (a, ids)
    }

    fn key(a: &Arena, id: ItemId) -> i64 {
        a.key(id).unwrap().value().unwrap()
    }

    fn kids(a: &Arena, id: ItemId) -> Vec<i64> {
        a.children(id).map(|c| key(a, c)).collect()
    }

    fn links(a: &Arena) -> Vec<(i64, i64, Direction, Phase)> {
        a.log()
            .links
            .iter()
            .map(|r: &LinkRecord| {
                let LinkContext::Consolidate { phase, .. } = r.context else {
                    panic!("not a consolidation link")
                };
                (key(a, r.winner), key(a, r.loser), r.direction.unwrap(), phase)
            })
            .collect()
    }

    #[test]
    fn single_root_no_links() {
        for v in VariantId::ALL {
            let (mut a, ids) = setup(&[7]);
            assert_eq!(consolidate(&mut a, v, &ids, 0), Some(ids[0]));
            assert_eq!(a.counters().links, 0);
            assert_eq!(a.counters().comparisons, 0);
        }
        let (mut a, _) = setup(&[]);
        assert_eq!(consolidate(&mut a, VariantId::Slim, &[], 0), None);
    }

    #[test]
    fn two_pass_two_roots() {
        let (mut a, ids) = setup(&[2, 1]);
        let r = two_pass_consolidate(&mut a, &ids, 0).unwrap();
        assert_eq!(key(&a, r), 1);
        assert_eq!(kids(&a, r), vec![2]);
        assert_eq!(a.counters().links, 1);
    }

    #[test]
    fn two_pass_five_roots() {
        let (mut a, ids) = setup(&[4, 1, 3, 2, 5]);
        let r = two_pass_consolidate(&mut a, &ids, 0).unwrap();
        assert_eq!(key(&a, r), 1);
        assert_eq!(kids(&a, r), vec![2, 4]);
        assert_eq!(kids(&a, ids[3]), vec![5, 3]);
        use Direction::*;
        assert_eq!(
            links(&a),
            vec![
                (1, 4, Left, Phase::Pass(1)),
                (2, 3, Left, Phase::Pass(1)),
                (2, 5, Right, Phase::Assembly),
                (1, 2, Right, Phase::Assembly),
            ]
        );
    }

    #[test]
    fn multipass_five_roots() {
        let (mut a, ids) = setup(&[4, 1, 3, 2, 5]);
        let r = multipass_consolidate(&mut a, &ids, 0).unwrap();
        assert_eq!(key(&a, r), 1);
        use Direction::*;
        assert_eq!(
            links(&a),
            vec![
                (1, 4, Left, Phase::Pass(1)),
                (2, 3, Left, Phase::Pass(1)),
                (1, 2, Right, Phase::Pass(2)),
                (1, 5, Right, Phase::Pass(3)),
            ]
        );
        assert_eq!(kids(&a, r), vec![5, 2, 4]);
    }

    #[test]
    fn slim_example() {
        let (mut a, ids) = setup(&[2, 5, 3]);
        let r = locally_max_consolidate(&mut a, &ids, Placement::OneSided, 0).unwrap();
        assert_eq!(key(&a, r), 2);
        assert_eq!(kids(&a, r), vec![3]);
        assert_eq!(kids(&a, ids[2]), vec![5]);
        use Direction::*;
        assert_eq!(links(&a), vec![(3, 5, Left, Phase::Scan), (2, 3, Right, Phase::Scan)]);
        assert!(a.counters().comparisons <= 4);
    }

    #[test]
    fn smooth_example_stable_sides() {
        let (mut a, ids) = setup(&[2, 5, 3]);
        let r = locally_max_consolidate(&mut a, &ids, Placement::Stable, 0).unwrap();
        assert_eq!(key(&a, r), 2);
        let root = a.node(r).unwrap();
        assert_eq!(root.last_child, Some(ids[2]));
        assert_eq!(a.node(ids[2]).unwrap().first_child, Some(ids[1]));
        // add a left child to 2 to see both ends used
        let (mut b, ids) = setup(&[5, 2, 3]);
        let r = locally_max_consolidate(&mut b, &ids, Placement::Stable, 0).unwrap();
        assert_eq!(key(&b, r), 2);
        assert_eq!(kids(&b, r), vec![5, 3]);
        assert_eq!(b.node(ids[0]).unwrap().link_dir, Some(Direction::Left));
        assert_eq!(b.node(ids[2]).unwrap().link_dir, Some(Direction::Right));
    }

    #[test]
    fn increasing_links_rightmost_pair_first() {
        let (mut a, ids) = setup(&[1, 2, 3]);
        let r = locally_max_consolidate(&mut a, &ids, Placement::OneSided, 0).unwrap();
        assert_eq!(key(&a, r), 1);
        assert_eq!(kids(&a, ids[0]), vec![2]);
        assert_eq!(kids(&a, ids[1]), vec![3]);
        use Direction::*;
        assert_eq!(links(&a), vec![(2, 3, Right, Phase::Scan), (1, 2, Right, Phase::Scan)]);
    }

    #[test]
    fn equal_keys_neighbor_wins() {
        // local max 4 with neighbors 4 and 4: links with the left neighbor
        let (mut a, ids) = setup(&[4, 4, 4]);
        let r = locally_max_consolidate(&mut a, &ids, Placement::OneSided, 0).unwrap();
        let recs = &a.log().links;
        // first root is a local max against the left sentinel; it loses to its right neighbor
        assert_eq!(recs[0].winner, ids[1]);
        assert_eq!(recs[0].loser, ids[0]);
        assert_eq!(r, ids[2]);
    }

    #[test]
    fn decreasing_input() {
        let (mut a, ids) = setup(&[5, 4, 3, 2, 1]);
        let r = locally_max_consolidate(&mut a, &ids, Placement::OneSided, 0).unwrap();
        assert_eq!(key(&a, r), 1);
        // each root is beaten by its right neighbor in turn: a path
        assert_eq!(kids(&a, ids[4]), vec![2]);
        assert_eq!(a.counters().links, 4);
    }
}
