use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::trace::{Op, Output, Trace, TraceError};

/// Key reported by a find-min or delete-min (`None` for find-min on an
/// empty heap).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleOutput {
    pub op: usize,
    pub key: Option<i64>,
}

/// Replays a trace on one sorted multiset per heap label. Entries are
/// `(key, item label)`, so equal keys stay distinct and a delete-min removes
/// the lowest label among the tied items. Shares no code with the heaps.
pub fn oracle_replay(t: &Trace) -> Result<Vec<OracleOutput>, TraceError> {
    let mut sets: Vec<Option<BTreeSet<(i64, u32)>>> = Vec::new();
    let mut parent: Vec<usize> = Vec::new();
    // item label -> (key, heap label at insert), None once deleted
    let mut items: Vec<Option<(i64, usize)>> = Vec::new();
    let mut out = Vec::new();

    fn root(parent: &[usize], mut h: usize) -> usize {
        while parent[h] != h {
            h = parent[h];
        }
        h
    }
    let err = |op: usize, msg: String| TraceError::Invalid { op, msg };
    let live = |sets: &[Option<BTreeSet<(i64, u32)>>], op: usize, h: u32| -> Result<usize, TraceError> {
        match sets.get(h as usize) {
            Some(Some(_)) => Ok(h as usize),
            _ => Err(err(op, format!("heap {h} is not live"))),
        }
    };

    for (i, op) in t.ops.iter().enumerate() {
        match *op {
            Op::MakeHeap => {
                parent.push(sets.len());
                sets.push(Some(BTreeSet::new()));
            }
            Op::Insert { heap, item, key } => {
                let h = live(&sets, i, heap)?;
                if item as usize != items.len() {
                    return Err(err(i, format!("item label {item} out of order")));
                }
                items.push(Some((key, h)));
                sets[h].as_mut().unwrap().insert((key, item));
            }
            Op::FindMin { heap } => {
                let h = live(&sets, i, heap)?;
                out.push(OracleOutput {
                    op: i,
                    key: sets[h].as_ref().unwrap().first().map(|e| e.0),
                });
            }
            Op::DeleteMin { heap } => {
                let h = live(&sets, i, heap)?;
                let (k, gone) = sets[h]
                    .as_mut()
                    .unwrap()
                    .pop_first()
                    .ok_or_else(|| err(i, "delete-min on an empty heap".into()))?;
                out.push(OracleOutput { op: i, key: Some(k) });
                items[gone as usize] = None;
            }
            Op::Meld { heap, other } => {
                let a = live(&sets, i, heap)?;
                let b = live(&sets, i, other)?;
                if a == b {
                    return Err(err(i, format!("heap {heap} melded with itself")));
                }
                let mut moved = sets[b].take().unwrap();
                sets[a].as_mut().unwrap().append(&mut moved);
                parent[b] = a;
            }
            Op::DecreaseKey { heap, item, key } => {
                let h = live(&sets, i, heap)?;
                let (old, home) = items
                    .get(item as usize)
                    .copied()
                    .flatten()
                    .ok_or_else(|| err(i, format!("item {item} is not live")))?;
                if root(&parent, home) != h {
                    return Err(err(i, format!("item {item} is not in heap {heap}")));
                }
                if key > old {
                    return Err(err(i, format!("key of item {item} increases")));
                }
                let set = sets[h].as_mut().unwrap();
                set.remove(&(old, item));
                set.insert((key, item));
                items[item as usize] = Some((key, home));
            }
            Op::Delete { heap, item } => {
                let h = live(&sets, i, heap)?;
                let (old, home) = items
                    .get(item as usize)
                    .copied()
                    .flatten()
                    .ok_or_else(|| err(i, format!("item {item} is not live")))?;
                if root(&parent, home) != h {
                    return Err(err(i, format!("item {item} is not in heap {heap}")));
                }
                sets[h].as_mut().unwrap().remove(&(old, item));
                items[item as usize] = None;
            }
        }
    }
    Ok(out)
}

/// Index of the first output whose key differs from the oracle, or whose
/// count differs.
pub fn compare_outputs(got: &[Output], want: &[OracleOutput]) -> Result<(), String> {
    for (g, w) in got.iter().zip(want) {
        if g.op != w.op || g.key != w.key {
            return Err(format!(
                "op {}: heap returned {:?}, oracle {:?} (op {})",
                g.op, g.key, w.key, w.op
            ));
        }
    }
    if got.len() != want.len() {
        return Err(format!("{} outputs, oracle has {}", got.len(), want.len()));
    }
    Ok(())
}
