use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Op, Trace, TraceModel};

/// Relative frequencies of each op kind in a random trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixWeights {
    pub insert: f64,
    pub delete_min: f64,
    pub decrease_key: f64,
    pub meld: f64,
    pub delete: f64,
    pub find_min: f64,
    pub make_heap: f64,
}

impl MixWeights {
    /// Insert, delete-min and decrease-key only.
    pub fn idk(insert: f64, delete_min: f64, decrease_key: f64) -> Self {
        MixWeights {
            insert,
            delete_min,
            decrease_key,
            meld: 0.0,
            delete: 0.0,
            find_min: 0.0,
            make_heap: 0.0,
        }
    }

    fn as_array(&self) -> [f64; 7] {
        [
            self.insert,
            self.delete_min,
            self.decrease_key,
            self.meld,
            self.delete,
            self.find_min,
            self.make_heap,
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomConfig {
    pub weights: MixWeights,
    /// Number of ops drawn from the mix (initial make-heaps and prefill
    /// inserts are extra).
    pub n_ops: usize,
    pub n_heaps: usize,
    /// Inclusive range for inserted keys. Decrease-keys lower a key by up to
    /// the width of this range.
    pub key_range: (i64, i64),
    /// Inserts into heap 0 before the mix starts.
    pub prefill: usize,
    /// Keep all live keys distinct so delete-min results are unique items.
    pub distinct_keys: bool,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            weights: MixWeights::idk(5.0, 3.0, 2.0),
            n_ops: 1000,
            n_heaps: 1,
            key_range: (0, 1_000_000),
            prefill: 0,
            distinct_keys: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("infeasible configuration: {0}")]
    Infeasible(String),
}

const INSERT: usize = 0;
const DELETE_MIN: usize = 1;
const DECREASE_KEY: usize = 2;
const MELD: usize = 3;
const DELETE: usize = 4;
const FIND_MIN: usize = 5;
const MAKE_HEAP: usize = 6;

struct Gen {
    rng: ChaCha8Rng,
    model: TraceModel,
    ops: Vec<Op>,
    live_keys: Option<HashSet<i64>>,
    lo: i64,
    hi: i64,
}

impl Gen {
    fn push(&mut self, op: Op) {
        self.model.apply(&op).expect("generator produced an invalid op");
        self.ops.push(op);
    }

    fn fresh_key(&mut self, lo: i64, hi: i64) -> Option<i64> {
        match &self.live_keys {
            None => Some(self.rng.random_range(lo..=hi)),
            Some(used) => {
                for _ in 0..64 {
                    let k = self.rng.random_range(lo..=hi);
                    if !used.contains(&k) {
                        return Some(k);
                    }
                }
                None
            }
        }
    }

    fn insert(&mut self, heap: u32) -> bool {
        let Some(key) = self.fresh_key(self.lo, self.hi) else {
            return false;
        };
        if let Some(used) = &mut self.live_keys {
            used.insert(key);
        }
        let item = self.model.next_item_label();
        self.push(Op::Insert { heap, item, key });
        true
    }

    fn pick<T: Copy>(&mut self, xs: &[T]) -> T {
        xs[self.rng.random_range(0..xs.len())]
    }

    fn feasible(&self, kind: usize) -> bool {
        match kind {
            DELETE_MIN => self
                .model
                .live_heaps()
                .iter()
                .any(|&h| self.model.heap_len(h) > 0),
            DECREASE_KEY | DELETE => !self.model.touchable().is_empty(),
            MELD => self.model.live_heaps().len() >= 2,
            _ => true,
        }
    }

    /// Tries to emit one op of `kind`; false if it had to be skipped.
    fn emit(&mut self, kind: usize) -> bool {
        match kind {
            INSERT => {
                let h = self.model.live_heaps()[self.rng.random_range(0..self.model.live_heaps().len())];
                self.insert(h)
            }
            DELETE_MIN => {
                let nonempty: Vec<u32> = self
                    .model
                    .live_heaps()
                    .iter()
                    .copied()
                    .filter(|&h| self.model.heap_len(h) > 0)
                    .collect();
                let heap = self.pick(&nonempty);
                if let Some(used) = &mut self.live_keys {
                    // the minimum key leaves the heap
                    if let Some(&(k, _)) = self.model.heaps[heap as usize].set.iter().next() {
                        used.remove(&k);
                    }
                }
                self.push(Op::DeleteMin { heap });
                true
            }
            DECREASE_KEY => {
                let item = self.model.touchable()[self.rng.random_range(0..self.model.touchable().len())];
                let (cur, heap) = self.model.item_state(item).expect("touchable is live");
                let span = self.hi - self.lo;
                let Some(key) = self.fresh_key(cur.saturating_sub(span), cur) else {
                    return false;
                };
                if let Some(used) = &mut self.live_keys {
                    used.remove(&cur);
                    used.insert(key);
                }
                self.push(Op::DecreaseKey { heap, item, key });
                true
            }
            DELETE => {
                let item = self.model.touchable()[self.rng.random_range(0..self.model.touchable().len())];
                let (cur, heap) = self.model.item_state(item).expect("touchable is live");
                if let Some(used) = &mut self.live_keys {
                    used.remove(&cur);
                }
                self.push(Op::Delete { heap, item });
                true
            }
            MELD => {
                let live = self.model.live_heaps().to_vec();
                let i = self.rng.random_range(0..live.len());
                let mut j = self.rng.random_range(0..live.len() - 1);
                if j >= i {
                    j += 1;
                }
                self.push(Op::Meld {
                    heap: live[i],
                    other: live[j],
                });
                true
            }
            FIND_MIN => {
                let heap = self.model.live_heaps()[self.rng.random_range(0..self.model.live_heaps().len())];
                self.push(Op::FindMin { heap });
                true
            }
            MAKE_HEAP => {
                self.push(Op::MakeHeap);
                true
            }
            _ => unreachable!(),
        }
    }
}

/// Random operation mix. Infeasible draws (delete-min with every heap empty,
/// decrease-key with nothing to decrease, ...) are redrawn from the feasible
/// kinds, so the result is always a well-formed trace.
pub fn gen_random_trace(cfg: &RandomConfig, seed: u64) -> Result<Trace, GenError> {
    let w = cfg.weights.as_array();
    if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(GenError::Infeasible("weights must be finite and nonnegative".into()));
    }
    if w[INSERT] <= 0.0 {
        return Err(GenError::Infeasible("insert weight must be positive".into()));
    }
    if cfg.n_heaps == 0 {
        return Err(GenError::Infeasible("need at least one heap".into()));
    }
    let (lo, hi) = cfg.key_range;
    if lo > hi {
        return Err(GenError::Infeasible("empty key range".into()));
    }
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        model: TraceModel::new(),
        ops: Vec::with_capacity(cfg.n_ops + cfg.n_heaps + cfg.prefill),
        live_keys: cfg.distinct_keys.then(HashSet::new),
        lo,
        hi,
    };
    for _ in 0..cfg.n_heaps {
        g.push(Op::MakeHeap);
    }
    for _ in 0..cfg.prefill {
        if !g.insert(0) {
            return Err(GenError::Infeasible("key range too small for distinct keys".into()));
        }
    }
    let mut emitted = 0;
    let mut stalls = 0;
    while emitted < cfg.n_ops {
        let mut weights = w;
        for (kind, wt) in weights.iter_mut().enumerate() {
            if !g.feasible(kind) {
                *wt = 0.0;
            }
        }
        let total: f64 = weights.iter().sum();
        let mut x = g.rng.random::<f64>() * total;
        let mut kind = INSERT;
        for (k, &wt) in weights.iter().enumerate() {
            if wt > 0.0 {
                kind = k;
                if x < wt {
                    break;
                }
                x -= wt;
            }
        }
        if g.emit(kind) {
            emitted += 1;
            stalls = 0;
        } else {
            stalls += 1;
            if stalls > 10_000 {
                return Err(GenError::Infeasible("key range too small for distinct keys".into()));
            }
        }
    }
    let ww = &cfg.weights;
    Ok(Trace {
        ops: g.ops,
        seed,
        meta: format!(
            "random n_ops={} n_heaps={} prefill={} keys={}..={} distinct={} mix={}:{}:{}:{}:{}:{}:{}",
            cfg.n_ops,
            cfg.n_heaps,
            cfg.prefill,
            lo,
            hi,
            cfg.distinct_keys,
            ww.insert,
            ww.delete_min,
            ww.decrease_key,
            ww.meld,
            ww.delete,
            ww.find_min,
            ww.make_heap
        ),
    })
}

/// One heap, `n` inserts of a seeded permutation of `1..=n`, then `n`
/// delete-mins.
pub fn gen_sorting_trace(n: usize, seed: u64) -> Trace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keys: Vec<i64> = (1..=n as i64).collect();
    keys.shuffle(&mut rng);
    let mut ops = Vec::with_capacity(2 * n + 1);
    ops.push(Op::MakeHeap);
    for (i, &key) in keys.iter().enumerate() {
        ops.push(Op::Insert {
            heap: 0,
            item: i as u32,
            key,
        });
    }
    ops.extend(std::iter::repeat_n(Op::DeleteMin { heap: 0 }, n));
    Trace {
        ops,
        seed,
        meta: format!("sorting n={n}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{serialize_trace, validate};

    #[test]
    fn deterministic() {
        let cfg = RandomConfig {
            weights: MixWeights {
                meld: 0.5,
                delete: 0.5,
                find_min: 0.5,
                make_heap: 0.2,
                ..MixWeights::idk(5.0, 3.0, 2.0)
            },
            n_heaps: 3,
            ..Default::default()
        };
        let a = serialize_trace(&gen_random_trace(&cfg, 7).unwrap());
        let b = serialize_trace(&gen_random_trace(&cfg, 7).unwrap());
        assert_eq!(a, b);
        let c = serialize_trace(&gen_random_trace(&cfg, 8).unwrap());
        assert_ne!(a, c);
    }

    #[test]
    fn insert_only() {
        let cfg = RandomConfig {
            weights: MixWeights::idk(1.0, 0.0, 0.0),
            n_ops: 50,
            ..Default::default()
        };
        let t = gen_random_trace(&cfg, 1).unwrap();
        assert_eq!(t.ops.len(), 51);
        assert!(t.ops[1..].iter().all(|op| matches!(op, Op::Insert { .. })));
    }

    #[test]
    fn rejects_infeasible() {
        let cfg = RandomConfig {
            weights: MixWeights::idk(0.0, 1.0, 1.0),
            ..Default::default()
        };
        assert!(gen_random_trace(&cfg, 0).is_err());
        let cfg = RandomConfig {
            weights: MixWeights::idk(1.0, -1.0, 1.0),
            ..Default::default()
        };
        assert!(gen_random_trace(&cfg, 0).is_err());
    }

    #[test]
    fn mix_proportions_within_ten_percent() {
        let cfg = RandomConfig {
            weights: MixWeights::idk(0.5, 0.3, 0.2),
            n_ops: 10_000,
            ..Default::default()
        };
        let t = gen_random_trace(&cfg, 42).unwrap();
        let count = |f: fn(&Op) -> bool| t.ops.iter().filter(|o| f(o)).count() as f64;
        let ins = count(|o| matches!(o, Op::Insert { .. }));
        let del = count(|o| matches!(o, Op::DeleteMin { .. }));
        let dk = count(|o| matches!(o, Op::DecreaseKey { .. }));
        for (got, want) in [(ins, 5000.0), (del, 3000.0), (dk, 2000.0)] {
            assert!((got - want).abs() <= 0.1 * want, "{got} vs {want}");
        }
    }

    #[test]
    fn sorting_trace_shape() {
        let t = gen_sorting_trace(1, 3);
        assert_eq!(
            t.ops,
            vec![
                Op::MakeHeap,
                Op::Insert { heap: 0, item: 0, key: 1 },
                Op::DeleteMin { heap: 0 }
            ]
        );
        let t = gen_sorting_trace(5, 11);
        let mut keys: Vec<i64> = t
            .ops
            .iter()
            .filter_map(|o| match o {
                Op::Insert { key, .. } => Some(*key),
                _ => None,
            })
            .collect();
        keys.sort();
        assert_eq!(keys, vec![1, 2, 3, 4, 5]);
        validate(&t.ops).unwrap();
    }

    #[test]
    fn sorting_trace_text_lines() {
        let text = serialize_trace(&gen_sorting_trace(2, 5));
        let ops: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(ops.len(), 5);
        assert_eq!(ops[0], "H");
        assert!(ops[1].starts_with("I "));
        assert!(ops[2].starts_with("I "));
    }

    #[test]
    fn distinct_mode_keys_unique() {
        let cfg = RandomConfig {
            n_ops: 3000,
            key_range: (0, 100_000),
            distinct_keys: true,
            ..Default::default()
        };
        let t = gen_random_trace(&cfg, 5).unwrap();
        let mut model = TraceModel::new();
        for op in &t.ops {
            model.apply(op).unwrap();
            let mut seen = HashSet::new();
            for h in model.live_heaps().to_vec() {
                for &(k, _) in &model.heaps[h as usize].set {
                    assert!(seen.insert(k), "duplicate live key {k}");
                }
            }
        }
    }
}
