//! Link and comparison counters, per-operation cost rows, amortized summaries
//! binned by heap size, and envelope growth fits.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OpKind {
    MakeHeap,
    Insert,
    FindMin,
    DeleteMin,
    Meld,
    DecreaseKey,
    Delete,
}

impl OpKind {
    pub fn name(self) -> &'static str {
        match self {
            OpKind::MakeHeap => "make_heap",
            OpKind::Insert => "insert",
            OpKind::FindMin => "find_min",
            OpKind::DeleteMin => "delete_min",
            OpKind::Meld => "meld",
            OpKind::DecreaseKey => "decrease_key",
            OpKind::Delete => "delete",
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Cost of one heap operation. `n` is the live size of the target heap(s)
/// just before the operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCost {
    pub kind: OpKind,
    pub n: usize,
    pub links: u64,
    pub comparisons: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub links: u64,
    pub comparisons: u64,
    pub cuts: u64,
    pub per_op: Vec<OpCost>,
}

impl Metrics {
    pub fn push(&mut self, kind: OpKind, n: usize, links: u64, comparisons: u64, cuts: u64) {
        self.links += links;
        self.comparisons += comparisons;
        self.cuts += cuts;
        self.per_op.push(OpCost {
            kind,
            n,
            links,
            comparisons,
        });
    }

    /// Appends `other`'s rows and adds its totals.
    pub fn merge(&mut self, other: &Metrics) {
        self.links += other.links;
        self.comparisons += other.comparisons;
        self.cuts += other.cuts;
        self.per_op.extend_from_slice(&other.per_op);
    }

    pub fn count(&self, kind: OpKind) -> usize {
        self.per_op.iter().filter(|r| r.kind == kind).count()
    }

    pub fn links_in(&self, kind: OpKind) -> u64 {
        self.per_op
            .iter()
            .filter(|r| r.kind == kind)
            .map(|r| r.links)
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub kind: OpKind,
    /// Lower edge of the size bin.
    pub n_bin: usize,
    pub count: usize,
    pub mean_links: f64,
    pub mean_cmps: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("no operations recorded")]
    Empty,
    #[error("need at least two points")]
    TooFewPoints,
    #[error("point with n = {0} is below the minimum of 8")]
    SmallN(u64),
}

fn pow2_bin(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        1 << (usize::BITS - 1 - n.leading_zeros())
    }
}

/// Mean links and comparisons per operation kind and size bin. Bins are
/// powers of two unless `edges` (ascending lower edges) is given; sizes
/// below the first edge fall in a bin labelled 0.
pub fn amortized_summary(
    m: &Metrics,
    edges: Option<&[usize]>,
) -> Result<Vec<SummaryRow>, MetricsError> {
    if m.per_op.is_empty() {
        return Err(MetricsError::Empty);
    }
    let bin = |n: usize| match edges {
        None => pow2_bin(n),
        Some(edges) => match edges.partition_point(|&e| e <= n) {
            0 => 0,
            i => edges[i - 1],
        },
    };
    let mut acc: BTreeMap<(OpKind, usize), (usize, u64, u64)> = BTreeMap::new();
    for r in &m.per_op {
        let e = acc.entry((r.kind, bin(r.n))).or_default();
        e.0 += 1;
        e.1 += r.links;
        e.2 += r.comparisons;
    }
    Ok(acc
        .into_iter()
        .map(|((kind, n_bin), (count, links, cmps))| SummaryRow {
            kind,
            n_bin,
            count,
            mean_links: links as f64 / count as f64,
            mean_cmps: cmps as f64 / count as f64,
        })
        .collect())
}

pub const SUMMARY_CSV_HEADER: &str = "op,n_bin,count,mean_links,mean_cmps";

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::new();
    out.push_str(SUMMARY_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.6},{:.6}",
            r.kind, r.n_bin, r.count, r.mean_links, r.mean_cmps
        );
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GrowthModel {
    Const,
    Lg,
    LgLg,
    /// lg lg n · lg lg lg n
    LgLgTimesLgLgLg,
}

/// `max(log2 x, 0)`
pub fn lg(x: f64) -> f64 {
    if x <= 1.0 {
        0.0
    } else {
        x.log2()
    }
}

impl GrowthModel {
    pub fn eval(self, n: u64) -> f64 {
        let n = n as f64;
        match self {
            GrowthModel::Const => 1.0,
            GrowthModel::Lg => lg(n),
            GrowthModel::LgLg => lg(lg(n)),
            GrowthModel::LgLgTimesLgLgLg => lg(lg(n)) * lg(lg(lg(n))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GrowthModel::Const => "const",
            GrowthModel::Lg => "lg",
            GrowthModel::LgLg => "lglg",
            GrowthModel::LgLgTimesLgLgLg => "lg_lglglg",
        }
    }
}

impl FromStr for GrowthModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "const" => Ok(GrowthModel::Const),
            "lg" => Ok(GrowthModel::Lg),
            "lglg" => Ok(GrowthModel::LgLg),
            "lg_lglglg" => Ok(GrowthModel::LgLgTimesLgLgLg),
            other => Err(format!("unknown model `{other}`")),
        }
    }
}

/// Envelope fit: `coefficient` is the least `c` with `cost <= c * model(n)`
/// at every point. `max_residual_ratio` is the largest unused fraction of the
/// envelope, `1 - cost / (c * model(n))`, over the points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub model: GrowthModel,
    pub coefficient: f64,
    pub max_residual_ratio: f64,
}

pub fn fit_growth(points: &[(u64, f64)], model: GrowthModel) -> Result<GrowthFit, MetricsError> {
    if points.len() < 2 {
        return Err(MetricsError::TooFewPoints);
    }
    if let Some(&(n, _)) = points.iter().find(|(n, _)| *n < 8) {
        return Err(MetricsError::SmallN(n));
    }
    let ratios: Vec<f64> = points.iter().map(|&(n, c)| c / model.eval(n)).collect();
    let coefficient = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max_residual_ratio = if coefficient > 0.0 {
        1.0 - min / coefficient
    } else {
        0.0
    };
    Ok(GrowthFit {
        model,
        coefficient,
        max_residual_ratio,
    })
}
