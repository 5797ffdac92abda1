use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::arena::ItemId;
use crate::log::{CutCause, Direction, LinkContext, LinkId};
use crate::trace::{Op, ReplayResult, Trace};

use super::VerifyError;

/// The operation that made a link: left or right for delete-min links,
/// insertion for insert and meld links.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinkKind {
    Left,
    Right,
    Insertion,
    DecreaseKey,
}

/// The operation that cut a link, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Fate {
    KeyLink,
    DeleteLink,
    FinalLink,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reality {
    Real,
    Phantom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quality {
    Good,
    Bad,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinkClass {
    pub kind: LinkKind,
    pub fate: Fate,
    pub reality: Reality,
    /// Only for left and right links.
    pub quality: Option<Quality>,
}

/// A node is temporary if the trace deletes it, permanent otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeClass {
    pub temporary: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Classification {
    /// Parallel to `ReplayResult::links`.
    pub links: Vec<LinkClass>,
    /// Parallel to `ReplayResult::items` (indexed by item label).
    pub nodes: Vec<NodeClass>,
    pub temporary: HashSet<ItemId>,
}

impl Classification {
    pub fn count(&self, f: impl Fn(&LinkClass) -> bool) -> usize {
        self.links.iter().filter(|c| f(c)).count()
    }
}

/// Assigns every logged link its kind, fate, reality and quality.
pub fn classify(t: &Trace, r: &ReplayResult) -> Result<Classification, VerifyError> {
    if r.links.len() as u64 != r.metrics.links {
        return Err(if r.links.is_empty() {
            VerifyError::MissingLog
        } else {
            VerifyError::Inconsistent(format!(
                "{} links logged, {} counted",
                r.links.len(),
                r.metrics.links
            ))
        });
    }
    let bad = |msg: String| VerifyError::Inconsistent(msg);
    let label = |item: u32| -> Result<ItemId, VerifyError> {
        r.items
            .get(item as usize)
            .copied()
            .ok_or_else(|| bad(format!("item label {item} has no handle")))
    };

    let mut temporary = HashSet::new();
    for o in &r.outputs {
        match t.ops.get(o.op) {
            Some(Op::DeleteMin { .. }) => {
                let item = o.item.ok_or_else(|| bad(format!("op {}: delete-min without item", o.op)))?;
                temporary.insert(label(item)?);
            }
            Some(Op::FindMin { .. }) => {}
            _ => return Err(bad(format!("output for op {} which is not a find-min or delete-min", o.op))),
        }
    }
    for op in &t.ops {
        if let Op::Delete { item, .. } = *op {
            temporary.insert(label(item)?);
        }
    }

    let mut cut_by: HashMap<LinkId, CutCause> = HashMap::with_capacity(r.cuts.len());
    for c in &r.cuts {
        if cut_by.insert(c.link, c.cause).is_some() {
            return Err(bad(format!("link {} cut twice", c.link.0)));
        }
    }

    let mut links = Vec::with_capacity(r.links.len());
    let mut seen = 0usize;
    for l in &r.links {
        let kind = match (l.context, l.direction) {
            (LinkContext::Insert | LinkContext::Meld, _) => LinkKind::Insertion,
            (LinkContext::DecreaseKey, _) => LinkKind::DecreaseKey,
            (LinkContext::Consolidate { .. }, Some(Direction::Left)) => LinkKind::Left,
            (LinkContext::Consolidate { .. }, Some(Direction::Right)) => LinkKind::Right,
            (LinkContext::Consolidate { .. }, None) => {
                return Err(bad(format!("delete-min link {} has no direction", l.id.0)))
            }
        };
        let fate = match cut_by.get(&l.id) {
            Some(CutCause::DecreaseKey) => Fate::KeyLink,
            Some(CutCause::DeleteMin) => Fate::DeleteLink,
            None => Fate::FinalLink,
        };
        seen += usize::from(fate != Fate::FinalLink);
        let wt = temporary.contains(&l.winner);
        let lt = temporary.contains(&l.loser);
        let reality = if wt && lt && fate == Fate::DeleteLink {
            Reality::Real
        } else {
            Reality::Phantom
        };
        let quality = matches!(kind, LinkKind::Left | LinkKind::Right).then_some(if lt || !wt {
            Quality::Good
        } else {
            Quality::Bad
        });
        links.push(LinkClass {
            kind,
            fate,
            reality,
            quality,
        });
    }
    if seen != cut_by.len() {
        return Err(bad("a cut refers to a link that was never logged".into()));
    }
    let nodes = r
        .items
        .iter()
        .map(|e| NodeClass {
            temporary: temporary.contains(e),
        })
        .collect();
    Ok(Classification {
        links,
        nodes,
        temporary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heap::Mode;
    use crate::trace::{gen_sorting_trace, parse_trace, replay, ReplayOptions};
    use crate::variants::VariantId;

    fn run(text: &str, v: VariantId, m: Mode) -> (Trace, ReplayResult, Classification) {
        let t = parse_trace(text).unwrap();
        let r = replay(&t, v, m, ReplayOptions { record: true }).unwrap();
        let c = classify(&t, &r).unwrap();
        (t, r, c)
    }

    #[test]
    fn lone_insertion_link_is_final_phantom() {
        let (_, _, c) = run("H\nI 0 0 1\nI 0 1 2\n", VariantId::Slim, Mode::Eager);
        assert_eq!(
            c.links,
            vec![LinkClass {
                kind: LinkKind::Insertion,
                fate: Fate::FinalLink,
                reality: Reality::Phantom,
                quality: None
            }]
        );
        assert!(c.nodes.iter().all(|n| !n.temporary));
    }

    #[test]
    fn cut_by_decrease_key_is_key_link() {
        let (_, r, c) = run(
            "H\nI 0 0 5\nI 0 1 2\nK 0 0 1\nD 0\nD 0\n",
            VariantId::Smooth,
            Mode::Eager,
        );
        assert_eq!(r.links[0].winner, r.items[1]);
        assert_eq!(r.links[0].loser, r.items[0]);
        assert_eq!(c.links[0].fate, Fate::KeyLink);
        assert_eq!(c.links[0].kind, LinkKind::Insertion);
        assert!(c.nodes.iter().all(|n| n.temporary));
    }

    #[test]
    fn sorting_trace_has_no_final_links() {
        for v in VariantId::ALL {
            for m in Mode::ALL {
                let t = gen_sorting_trace(64, 9);
                let r = replay(&t, v, m, ReplayOptions { record: true }).unwrap();
                let c = classify(&t, &r).unwrap();
                assert_eq!(c.count(|l| l.fate == Fate::FinalLink), 0);
                assert!(c.links.iter().all(|l| l.quality != Some(Quality::Bad)));
            }
        }
    }

    #[test]
    fn totality() {
        let (_, r, c) = run(
            "H\nI 0 0 5\nI 0 1 2\nI 0 2 7\nI 0 3 4\nD 0\nK 0 2 1\nX 0 3\n",
            VariantId::Multipass,
            Mode::Lazy,
        );
        assert_eq!(c.links.len(), r.links.len());
        for l in &c.links {
            let lr = matches!(l.kind, LinkKind::Left | LinkKind::Right);
            assert_eq!(l.quality.is_some(), lr);
        }
    }

    #[test]
    fn missing_log() {
        let t = gen_sorting_trace(8, 1);
        let r = replay(&t, VariantId::Pairing, Mode::Eager, ReplayOptions::default()).unwrap();
        assert_eq!(classify(&t, &r), Err(VerifyError::MissingLog));
    }
}
