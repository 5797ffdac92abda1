use std::collections::{HashMap, HashSet};

use crate::arena::{Arena, ItemId};
use crate::key::ExtKey;
use crate::log::{Direction, LinkContext, LinkRecord, Phase};
use crate::trace::{Op, ReplayResult, Trace};
use crate::variants::{consolidate, VariantId};

use super::classify::{classify, Fate, LinkKind};
use super::treap::{check_boundary_alternation, Treap};
use super::{Report, VerifyError};

/// Checks one delete-min consolidation given its root list (left to right,
/// keys at that time), its links in execution order and the comparisons it
/// counted. With `temporary` the good-link bound is checked too.
pub fn check_consolidation(
    report: &mut Report,
    variant: VariantId,
    roots: &[(ItemId, ExtKey)],
    links: &[&LinkRecord],
    comparisons: u64,
    temporary: Option<&HashSet<ItemId>>,
) {
    let r = roots.len();
    let k = links.len();
    let tag = || format!("round with {r} roots");
    report.check("link-count", k == r.saturating_sub(1), || {
        format!("{}: {k} links", tag())
    });
    let losers: HashSet<ItemId> = links.iter().map(|l| l.loser).collect();
    let survivors: Vec<&(ItemId, ExtKey)> = roots.iter().filter(|(e, _)| !losers.contains(e)).collect();
    let min = roots.iter().map(|&(_, key)| key).min();
    report.check(
        "consolidation-min",
        r == 0 || (survivors.len() == 1 && Some(survivors[0].1) == min),
        || format!("{}: survivors {survivors:?}, minimum {min:?}", tag()),
    );
    report.check("comparisons", comparisons <= 2 * k as u64, || {
        format!("{}: {comparisons} comparisons for {k} links", tag())
    });

    match variant {
        VariantId::Multipass => check_passes(report, r, links),
        VariantId::Slim | VariantId::Smooth => {
            let mut wins: HashMap<(ItemId, Direction), u32> = HashMap::new();
            for l in links {
                if let Some(d) = l.direction {
                    *wins.entry((l.winner, d)).or_default() += 1;
                }
            }
            let worst = wins.iter().find(|(_, &c)| c > 1);
            report.check("win-limit", worst.is_none(), || {
                let ((e, d), c) = worst.expect("failing");
                format!("{}: {e:?} won {c} {d:?} links", tag())
            });
            match Treap::from_links(roots, links) {
                Ok(t) => {
                    report.check("treap", true, String::new);
                    report.merge(&check_boundary_alternation(&t));
                }
                Err(msg) => report.check("treap", false, || format!("{}: {msg}", tag())),
            }
        }
        VariantId::Pairing => {}
    }

    if let Some(temp) = temporary {
        let good = links
            .iter()
            .filter(|l| temp.contains(&l.loser) || !temp.contains(&l.winner))
            .count() as i64;
        let k = k as i64;
        // good >= k/2 - 1 and good >= k/3 - 2/3, cross-multiplied
        let ok = match variant {
            VariantId::Multipass => Some(2 * good >= k - 2),
            VariantId::Slim | VariantId::Smooth => Some(3 * good >= k - 2),
            VariantId::Pairing => None,
        };
        if let Some(ok) = ok {
            report.check("good-links", ok, || format!("{}: {good} good of {k} links", tag()));
        }
    }
}

/// Multipass: pass i does exactly floor(r_i / 2) links on r_i roots, and at
/// most k / 2^i links remain after pass i.
fn check_passes(report: &mut Report, roots: usize, links: &[&LinkRecord]) {
    let k = links.len() as u128;
    let mut per_pass: Vec<u64> = Vec::new();
    let mut stray = 0;
    for l in links {
        match l.context {
            LinkContext::Consolidate {
                phase: Phase::Pass(i),
                ..
            } if i >= 1 => {
                let i = i as usize;
                if per_pass.len() < i {
                    per_pass.resize(i, 0);
                }
                per_pass[i - 1] += 1;
            }
            _ => stray += 1,
        }
    }
    let mut r = roots as u64;
    let mut exact = stray == 0;
    let mut halving = true;
    let mut detail = String::new();
    let mut done: u128 = 0;
    for (i, &c) in per_pass.iter().enumerate() {
        if c != r / 2 {
            exact = false;
            detail = format!("pass {} did {c} links on {r} roots", i + 1);
        }
        r -= c.min(r);
        done += c as u128;
        let remaining = k - done.min(k);
        let pass = i as u32 + 1;
        let bound_ok = pass >= 127 || remaining << pass <= k;
        if !bound_ok {
            halving = false;
            detail = format!("{remaining} of {k} links remain after pass {pass}");
        }
    }
    if r > 1 {
        exact = false;
        detail = format!("{r} roots left after the last pass");
    }
    report.check("pass-links", exact, || detail.clone());
    report.check("pass-halving", halving, || detail.clone());
}

/// Runs every per-delete-min check over a recorded replay and the global
/// counting bounds: insertion links at most insertions, and final links plus
/// delete-mins (deletes included) at most insertions.
pub fn check_lemmas(t: &Trace, r: &ReplayResult, variant: VariantId) -> Result<Report, VerifyError> {
    let class = classify(t, r)?;
    let mut report = Report::new();
    for id in ["link-count", "consolidation-min", "comparisons"] {
        report.touch(id);
    }
    match variant {
        VariantId::Multipass => {
            report.touch("pass-links");
            report.touch("pass-halving");
            report.touch("good-links");
        }
        VariantId::Slim | VariantId::Smooth => {
            for id in ["win-limit", "treap", "alternation", "lowest-crossing", "good-links"] {
                report.touch(id);
            }
        }
        VariantId::Pairing => {}
    }

    let mut by_round: HashMap<u64, Vec<&LinkRecord>> = HashMap::new();
    for l in &r.links {
        if let Some(round) = l.context.round() {
            by_round.entry(round).or_default().push(l);
        }
    }
    let deletions = t
        .ops
        .iter()
        .filter(|op| matches!(op, Op::DeleteMin { .. } | Op::Delete { .. }))
        .count();
    if r.consolidations.len() != deletions {
        return Err(VerifyError::Inconsistent(format!(
            "{} consolidations logged for {deletions} deletions",
            r.consolidations.len()
        )));
    }
    let empty = Vec::new();
    for c in &r.consolidations {
        let links = by_round.get(&c.round).unwrap_or(&empty);
        if links.len() as u64 != c.links {
            return Err(VerifyError::Inconsistent(format!(
                "round {} logged {} links, counted {}",
                c.round,
                links.len(),
                c.links
            )));
        }
        check_consolidation(&mut report, variant, &c.roots, links, c.comparisons, Some(&class.temporary));
    }

    let inserts = t.ops.iter().filter(|op| matches!(op, Op::Insert { .. })).count();
    let insertion_links = class.count(|l| l.kind == LinkKind::Insertion);
    report.check("insertion-links", insertion_links <= inserts, || {
        format!("{insertion_links} insertion links, {inserts} insertions")
    });
    let finals = class.count(|l| l.fate == Fate::FinalLink);
    report.check("final-links", finals + deletions <= inserts, || {
        format!("{finals} final links + {deletions} delete-mins, {inserts} insertions")
    });
    Ok(report)
}

/// Consolidates singleton roots with the given keys, left to right, and
/// checks the result.
pub fn check_root_list(variant: VariantId, keys: &[i64]) -> Report {
    let mut a = Arena::new(true);
    let ids: Vec<ItemId> = keys.iter().map(|&k| a.alloc(ExtKey::Value(k), 0)).collect();
    let roots: Vec<(ItemId, ExtKey)> = ids.iter().zip(keys).map(|(&e, &k)| (e, ExtKey::Value(k))).collect();
    let before = a.counters().comparisons;
    consolidate(&mut a, variant, &ids, 0);
    let comparisons = a.counters().comparisons - before;
    let links: Vec<&LinkRecord> = a.log().links.iter().collect();
    let mut report = Report::new();
    check_consolidation(&mut report, variant, &roots, &links, comparisons, None);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heap::Mode;
    use crate::trace::{gen_random_trace, gen_sorting_trace, parse_trace, replay, MixWeights, RandomConfig, ReplayOptions};

    fn lemmas(t: &Trace, v: VariantId, m: Mode) -> Report {
        let r = replay(t, v, m, ReplayOptions { record: true }).unwrap();
        check_lemmas(t, &r, v).unwrap()
    }

    #[test]
    fn multipass_five_roots() {
        let mut a = Arena::new(true);
        let ids: Vec<ItemId> = [4, 1, 3, 2, 5].iter().map(|&k| a.alloc(ExtKey::Value(k), 0)).collect();
        consolidate(&mut a, VariantId::Multipass, &ids, 0);
        let per: Vec<u32> = a
            .log()
            .links
            .iter()
            .map(|l| match l.context {
                LinkContext::Consolidate { phase: Phase::Pass(i), .. } => i,
                _ => 0,
            })
            .collect();
        assert_eq!(per, vec![1, 1, 2, 3]);
        let r = check_root_list(VariantId::Multipass, &[4, 1, 3, 2, 5]);
        assert!(r.passed(), "{r}");
        assert_eq!(r.get("pass-links").unwrap().checked, 1);
    }

    #[test]
    fn slim_three_roots_at_limit() {
        let r = check_root_list(VariantId::Slim, &[2, 5, 3]);
        assert!(r.passed(), "{r}");
        assert_eq!(r.get("win-limit").unwrap().checked, 1);
        assert_eq!(r.get("alternation").unwrap().checked, 2);
    }

    #[test]
    fn inserts_only() {
        let mut text = String::from("H\n");
        for i in 0..20 {
            text += &format!("I 0 {i} {}\n", 100 - i);
        }
        let t = parse_trace(&text).unwrap();
        let r = replay(&t, VariantId::Smooth, Mode::Eager, ReplayOptions { record: true }).unwrap();
        assert_eq!(r.links.len(), 19);
        let rep = check_lemmas(&t, &r, VariantId::Smooth).unwrap();
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.get("insertion-links").unwrap().checked, 1);
    }

    #[test]
    fn sorting_and_random_traces_clean() {
        let cfg = RandomConfig {
            weights: MixWeights {
                meld: 0.3,
                delete: 0.5,
                make_heap: 0.1,
                find_min: 0.2,
                ..MixWeights::idk(5.0, 3.0, 2.0)
            },
            n_ops: 2000,
            n_heaps: 2,
            key_range: (0, 500),
            ..Default::default()
        };
        for seed in 0..3 {
            let traces = [gen_sorting_trace(300, seed), gen_random_trace(&cfg, seed).unwrap()];
            for t in &traces {
                for v in VariantId::ALL {
                    for m in Mode::ALL {
                        let rep = lemmas(t, v, m);
                        assert!(rep.passed(), "{v} {m} seed {seed}\n{rep}");
                    }
                }
            }
        }
    }

    #[test]
    fn corrupted_log_is_caught() {
        let t = gen_sorting_trace(50, 2);
        let mut r = replay(&t, VariantId::Slim, Mode::Lazy, ReplayOptions { record: true }).unwrap();
        // flip the direction of some delete-min link
        let l = r.links.iter_mut().find(|l| l.direction.is_some()).unwrap();
        l.direction = Some(match l.direction.unwrap() {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        });
        let rep = check_lemmas(&t, &r, VariantId::Slim).unwrap();
        assert!(!rep.passed());
    }
}
