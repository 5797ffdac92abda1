//! Independent checks on heaps and replays: a sorted-multiset oracle,
//! structural invariants, link classification, the per-delete-min lemmas and
//! treap boundary alternation.
//!
//! Fractional lemma bounds are compared exactly by cross-multiplying
//! integers.

mod classify;
mod lemmas;
mod oracle;
mod structure;
mod treap;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use classify::{classify, Classification, Fate, LinkClass, LinkKind, NodeClass, Quality, Reality};
pub use lemmas::{check_consolidation, check_lemmas, check_root_list};
pub use oracle::{compare_outputs, oracle_replay, OracleOutput};
pub use structure::{check_child_order, check_heap_order, check_heaps, check_structure};
pub use treap::{check_boundary_alternation, Treap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("replay was run without recording; no link log to check")]
    MissingLog,
    #[error("inconsistent log: {0}")]
    Inconsistent(String),
}

/// Outcome of one named check, accumulated over many instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaResult {
    pub id: String,
    pub checked: u64,
    pub violations: u64,
    /// The first few violation messages.
    pub examples: Vec<String>,
}

const MAX_EXAMPLES: usize = 5;

/// Ordered collection of check results. Rendered one line per check as
/// `LEMMA <id> PASS|FAIL <details>`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub results: Vec<LemmaResult>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    fn entry(&mut self, id: &str) -> &mut LemmaResult {
        let i = match self.results.iter().position(|r| r.id == id) {
            Some(i) => i,
            None => {
                self.results.push(LemmaResult {
                    id: id.to_string(),
                    checked: 0,
                    violations: 0,
                    examples: Vec::new(),
                });
                self.results.len() - 1
            }
        };
        &mut self.results[i]
    }

    /// Records one instance of check `id`; `msg` is called only on failure.
    pub fn check(&mut self, id: &str, ok: bool, msg: impl FnOnce() -> String) {
        let e = self.entry(id);
        e.checked += 1;
        if !ok {
            e.violations += 1;
            if e.examples.len() < MAX_EXAMPLES {
                e.examples.push(msg());
            }
        }
    }

    /// Makes `id` appear in the report even if nothing was checked.
    pub fn touch(&mut self, id: &str) {
        self.entry(id);
    }

    pub fn merge(&mut self, other: &Report) {
        for r in &other.results {
            let e = self.entry(&r.id);
            e.checked += r.checked;
            e.violations += r.violations;
            let room = MAX_EXAMPLES.saturating_sub(e.examples.len());
            e.examples.extend(r.examples.iter().take(room).cloned());
        }
    }

    pub fn get(&self, id: &str) -> Option<&LemmaResult> {
        self.results.iter().find(|r| r.id == id)
    }

    pub fn violations(&self) -> u64 {
        self.results.iter().map(|r| r.violations).sum()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            if r.violations == 0 {
                writeln!(f, "LEMMA {} PASS checked={}", r.id, r.checked)?;
            } else {
                write!(
                    f,
                    "LEMMA {} FAIL violations={} checked={}",
                    r.id, r.violations, r.checked
                )?;
                if let Some(first) = r.examples.first() {
                    write!(f, " first: {first}")?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}
