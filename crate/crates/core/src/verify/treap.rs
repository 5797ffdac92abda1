use std::collections::HashMap;

use crate::arena::ItemId;
use crate::key::ExtKey;
use crate::log::{Direction, LinkRecord};

use super::Report;

/// Binary tree formed by the links of one locally-maximum consolidation.
/// Nodes are root-list positions; a left link makes the loser the winner's
/// left child, a right link its right child.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Treap {
    pub keys: Vec<ExtKey>,
    pub parent: Vec<Option<usize>>,
    pub left: Vec<Option<usize>>,
    pub right: Vec<Option<usize>>,
    pub root: Option<usize>,
}

impl Treap {
    /// Builds the treap from `(winner, loser)` position pairs, checking that
    /// no node wins two links on one side, that the result is one tree, and
    /// that it is heap-ordered with symmetric order equal to position order.
    pub fn from_edges(keys: Vec<ExtKey>, edges: &[(usize, usize)]) -> Result<Treap, String> {
        let n = keys.len();
        let mut t = Treap {
            keys,
            parent: vec![None; n],
            left: vec![None; n],
            right: vec![None; n],
            root: None,
        };
        for &(w, l) in edges {
            if w >= n || l >= n || w == l {
                return Err(format!("link {w}->{l} out of range"));
            }
            if t.parent[l].is_some() {
                return Err(format!("position {l} loses twice"));
            }
            let slot = if l < w { &mut t.left[w] } else { &mut t.right[w] };
            if slot.is_some() {
                let side = if l < w { "left" } else { "right" };
                return Err(format!("position {w} wins two {side} links"));
            }
            *slot = Some(l);
            t.parent[l] = Some(w);
        }
        let roots: Vec<usize> = (0..n).filter(|&v| t.parent[v].is_none()).collect();
        match roots.len() {
            0 if n == 0 => {}
            1 => t.root = Some(roots[0]),
            k => return Err(format!("{k} roots after consolidation")),
        }
        for v in 0..n {
            if let Some(p) = t.parent[v] {
                if t.keys[p] > t.keys[v] {
                    return Err(format!("position {p} key {} above position {v} key {}", t.keys[p], t.keys[v]));
                }
            }
        }
        // symmetric order must be 0..n; this also rules out cycles
        let mut expect = 0;
        let mut stack = Vec::new();
        let mut cur = t.root;
        while cur.is_some() || !stack.is_empty() {
            while let Some(v) = cur {
                if stack.len() > n {
                    return Err("cycle in links".into());
                }
                stack.push(v);
                cur = t.left[v];
            }
            let v = stack.pop().expect("nonempty");
            if v != expect {
                return Err(format!("symmetric order visits position {v} at rank {expect}"));
            }
            expect += 1;
            cur = t.right[v];
        }
        if expect != n {
            return Err(format!("{expect} of {n} positions reachable"));
        }
        Ok(t)
    }

    /// Builds the treap of one consolidation from its root list and links,
    /// checking that each link's recorded direction matches the positions.
    pub fn from_links(roots: &[(ItemId, ExtKey)], links: &[&LinkRecord]) -> Result<Treap, String> {
        let pos: HashMap<ItemId, usize> = roots.iter().enumerate().map(|(i, &(e, _))| (e, i)).collect();
        let mut edges = Vec::with_capacity(links.len());
        for l in links {
            let w = *pos.get(&l.winner).ok_or_else(|| format!("winner {:?} not on the root list", l.winner))?;
            let x = *pos.get(&l.loser).ok_or_else(|| format!("loser {:?} not on the root list", l.loser))?;
            let dir = if x < w { Direction::Left } else { Direction::Right };
            if l.direction != Some(dir) {
                return Err(format!("link {} recorded {:?}, positions say {dir:?}", l.id.0, l.direction));
            }
            edges.push((w, x));
        }
        Treap::from_edges(roots.iter().map(|&(_, k)| k).collect(), &edges)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

/// For the boundary after each position x (all but the last): every link
/// crossing it lies on the path from the root to x's right child (or to x
/// if it has none), crossing links alternate left/right along that path,
/// and the lowest one is x's right link if x won one, otherwise the link
/// lost by the top of the chain of right links ending at x (x itself when
/// x is a left child).
pub fn check_boundary_alternation(t: &Treap) -> Report {
    let mut r = Report::new();
    r.touch("alternation");
    r.touch("lowest-crossing");
    let n = t.len();
    if n < 2 {
        return r;
    }
    // number of links crossing the boundary after each position
    let mut diff = vec![0i64; n + 1];
    for c in 0..n {
        if let Some(p) = t.parent[c] {
            let (lo, hi) = (p.min(c), p.max(c));
            diff[lo] += 1;
            diff[hi] -= 1;
        }
    }
    let mut crossing = vec![0i64; n];
    let mut acc = 0;
    for i in 0..n {
        acc += diff[i];
        crossing[i] = acc;
    }

    let mut path = Vec::new();
    for (x, &crossings) in crossing.iter().enumerate().take(n - 1) {
        let end = t.right[x].unwrap_or(x);
        path.clear();
        let mut v = end;
        while let Some(p) = t.parent[v] {
            path.push((p, v));
            v = p;
        }
        path.reverse();
        let crosses = |&(p, c): &(usize, usize)| p.min(c) <= x && x < p.max(c);
        let on_path: Vec<(usize, usize)> = path.iter().copied().filter(crosses).collect();
        let is_left = |(p, c): (usize, usize)| c < p;
        let alternates = on_path.windows(2).all(|w| is_left(w[0]) != is_left(w[1]));
        r.check(
            "alternation",
            on_path.len() as i64 == crossings && alternates,
            || {
                format!(
                    "boundary after position {x}: {} crossing links, {} on the path, alternating={alternates}",
                    crossings,
                    on_path.len()
                )
            },
        );
        let expected = match t.right[x] {
            Some(c) => Some((x, c)),
            None => {
                let mut top = x;
                while let Some(p) = t.parent[top] {
                    if t.right[p] == Some(top) {
                        top = p;
                    } else {
                        break;
                    }
                }
                t.parent[top].map(|p| (p, top))
            }
        };
        r.check("lowest-crossing", on_path.last().copied() == expected, || {
            format!(
                "boundary after position {x}: lowest crossing link {:?}, expected {expected:?}",
                on_path.last()
            )
        });
    }
    r
}
