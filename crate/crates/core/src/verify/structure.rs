use crate::arena::{Arena, ItemId};
use crate::heap::{Heaps, Mode};
use crate::log::Direction;
use crate::variants::VariantId;

use super::Report;

/// Preorder over the trees rooted at `roots`.
fn nodes(arena: &Arena, roots: &[ItemId]) -> Vec<ItemId> {
    let mut out = Vec::new();
    let mut stack: Vec<ItemId> = roots.iter().rev().copied().collect();
    while let Some(v) = stack.pop() {
        out.push(v);
        let kids: Vec<ItemId> = arena.children(v).collect();
        stack.extend(kids.into_iter().rev());
    }
    out
}

/// Every parent/child edge whose parent key exceeds the child key.
pub fn check_heap_order(arena: &Arena, roots: &[ItemId]) -> Vec<String> {
    let mut bad = Vec::new();
    for v in nodes(arena, roots) {
        let kv = arena.key(v).expect("live node");
        for c in arena.children(v) {
            let kc = arena.key(c).expect("live node");
            if kv > kc {
                bad.push(format!("parent {v:?} key {kv} above child {c:?} key {kc}"));
            }
        }
    }
    bad
}

/// Pointer consistency of the child lists under `roots`, and the total node
/// count if `expect_size` is given.
pub fn check_structure(arena: &Arena, roots: &[ItemId], expect_size: Option<usize>) -> Vec<String> {
    let mut bad = Vec::new();
    for &r in roots {
        match arena.node(r) {
            Ok(n) if n.parent.is_some() => bad.push(format!("root {r:?} has a parent")),
            Ok(_) => {}
            Err(e) => bad.push(format!("root {r:?}: {e}")),
        }
    }
    if !bad.is_empty() {
        return bad;
    }
    let all = nodes(arena, roots);
    for &v in &all {
        let n = arena.node(v).expect("checked above");
        let kids: Vec<ItemId> = arena.children(v).collect();
        if n.first_child != kids.first().copied() || n.last_child != kids.last().copied() {
            bad.push(format!("{v:?}: first/last child pointers disagree with the list"));
        }
        for (i, &c) in kids.iter().enumerate() {
            let cn = arena.node(c).expect("child is live");
            if cn.parent != Some(v) {
                bad.push(format!("child {c:?} of {v:?} points at parent {:?}", cn.parent));
            }
            let prev = i.checked_sub(1).map(|j| kids[j]);
            if cn.prev_sib != prev {
                bad.push(format!("child {c:?} of {v:?} has prev {:?}, expected {prev:?}", cn.prev_sib));
            }
            if cn.parent_link.is_none() {
                bad.push(format!("child {c:?} of {v:?} has no parent link"));
            }
        }
    }
    if let Some(n) = expect_size {
        if all.len() != n {
            bad.push(format!("{} nodes reachable, heap size is {n}", all.len()));
        }
    }
    bad
}

/// Sibling order by link time. One-sided variants keep every child list in
/// decreasing link time. Smooth heaps keep non-right-link children first,
/// in decreasing link time, then right-link children in increasing link
/// time.
pub fn check_child_order(arena: &Arena, roots: &[ItemId], variant: VariantId) -> Vec<String> {
    let mut bad = Vec::new();
    for v in nodes(arena, roots) {
        let kids: Vec<(ItemId, u64, bool)> = arena
            .children(v)
            .map(|c| {
                let n = arena.node(c).expect("child is live");
                let right = variant == VariantId::Smooth && n.link_dir == Some(Direction::Right);
                (c, n.link_time.unwrap_or(0), right)
            })
            .collect();
        for w in kids.windows(2) {
            let ((a, ta, ra), (b, tb, rb)) = (w[0], w[1]);
            let ok = match (ra, rb) {
                (false, false) => ta > tb,
                (true, true) => ta < tb,
                (false, true) => true,
                (true, false) => false,
            };
            if !ok {
                bad.push(format!(
                    "children {a:?} (t{ta}{}) and {b:?} (t{tb}{}) of {v:?} out of order",
                    if ra { ", right" } else { "" },
                    if rb { ", right" } else { "" },
                ));
            }
        }
    }
    bad
}

/// Heap order, structure, child order and min-root placement for every live
/// heap.
pub fn check_heaps(heaps: &Heaps) -> Report {
    let mut r = Report::new();
    let arena = heaps.arena();
    let ids: Vec<_> = heaps.heap_ids().collect();
    for h in ids {
        let roots = heaps.roots(h).expect("live heap");
        let size = heaps.size(h).expect("live heap");
        let bad = check_heap_order(arena, &roots);
        r.check("heap-order", bad.is_empty(), || format!("heap {}: {}", h.0, bad[0]));
        let bad = check_structure(arena, &roots, Some(size));
        r.check("structure", bad.is_empty(), || format!("heap {}: {}", h.0, bad[0]));
        let bad = check_child_order(arena, &roots, heaps.variant());
        r.check("child-order", bad.is_empty(), || format!("heap {}: {}", h.0, bad[0]));
        let top = heaps.top(h).expect("live heap");
        let top_ok = match (top, heaps.mode()) {
            (None, _) => roots.is_empty(),
            (Some(t), Mode::Eager) => roots == [t],
            (Some(t), Mode::Lazy) => {
                let kt = arena.key(t).expect("live");
                roots.last() == Some(&t) && roots.iter().all(|&x| arena.key(x).expect("live") >= kt)
            }
        };
        r.check("min-root", top_ok, || format!("heap {}: top {top:?} is not the minimum root", h.0));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::key::ExtKey;
    use crate::log::{LinkContext, Phase, Side};

    fn v(k: i64) -> ExtKey {
        ExtKey::Value(k)
    }

    #[test]
    fn parent_above_child_is_reported() {
        let mut a = Arena::new(false);
        let p = a.alloc(v(5), 0);
        let c = a.alloc(v(7), 0);
        a.attach(p, c, Side::Leftmost, None, LinkContext::Insert);
        a.set_key(c, v(3)).unwrap();
        let bad = check_heap_order(&a, &[p]);
        assert_eq!(bad.len(), 1);
        assert!(bad[0].contains(&format!("{p:?}")) && bad[0].contains(&format!("{c:?}")));
        assert!(check_heap_order(&a, &[]).is_empty());
    }

    #[test]
    fn replayed_heaps_are_clean() {
        use crate::trace::{gen_random_trace, replay_with, MixWeights, RandomConfig, ReplayOptions};
        let cfg = RandomConfig {
            weights: MixWeights {
                meld: 0.3,
                delete: 0.5,
                make_heap: 0.2,
                ..MixWeights::idk(5.0, 3.0, 2.0)
            },
            n_ops: 600,
            n_heaps: 3,
            key_range: (0, 50),
            ..Default::default()
        };
        let t = gen_random_trace(&cfg, 17).unwrap();
        for var in VariantId::ALL {
            for m in Mode::ALL {
                let mut total = Report::new();
                replay_with(&t, var, m, ReplayOptions::default(), |_, _, r| {
                    total.merge(&check_heaps(r.heaps()));
                })
                .unwrap();
                assert!(total.passed(), "{var} {m}\n{total}");
            }
        }
    }

    fn stamped(times: &[(u64, Option<Direction>)]) -> (Arena, ItemId) {
        let mut a = Arena::new(false);
        let p = a.alloc(v(0), 0);
        for &(t, dir) in times {
            let c = a.alloc(v(1), 0);
            let ctx = LinkContext::Consolidate { round: 0, phase: Phase::Scan };
            a.attach(p, c, Side::Rightmost, dir, ctx);
            a.set_link_time(c, t);
        }
        (a, p)
    }

    #[test]
    fn smooth_orders() {
        let l = Some(Direction::Left);
        let r = Some(Direction::Right);
        let (a, p) = stamped(&[(5, l), (3, l), (2, r), (4, r)]);
        assert!(check_child_order(&a, &[p], VariantId::Smooth).is_empty());
        let (a, p) = stamped(&[(5, l), (3, l), (4, r), (2, r)]);
        assert_eq!(check_child_order(&a, &[p], VariantId::Smooth).len(), 1);
        let (a, p) = stamped(&[(5, l), (3, l), (4, r), (2, r)]);
        assert!(!check_child_order(&a, &[p], VariantId::Slim).is_empty());
        let (a, p) = stamped(&[(5, l), (3, r), (4, l)]);
        assert!(!check_child_order(&a, &[p], VariantId::Smooth).is_empty());
    }
}
