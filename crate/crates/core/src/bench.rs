//! Growth sweeps: sorting mode (n inserts then n delete-mins) and a random
//! mix that holds the heap near size n, run over a grid of (variant, mode,
//! n, seed) cells in parallel.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::heap::Mode;
use crate::metrics::{fit_growth, lg, GrowthFit, GrowthModel, Metrics, MetricsError, OpKind};
use crate::trace::{gen_random_trace, gen_sorting_trace, replay, MixWeights, RandomConfig, ReplayOptions, Trace};
use crate::variants::VariantId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Workload {
    Sorting,
    Mix,
}

impl Workload {
    pub fn name(self) -> &'static str {
        match self {
            Workload::Sorting => "sorting",
            Workload::Mix => "mix",
        }
    }
}

/// Totals of one cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub workload: Workload,
    pub variant: VariantId,
    pub mode: Mode,
    pub n: usize,
    pub seed: u64,
    pub ops: u64,
    pub inserts: u64,
    pub delete_mins: u64,
    pub decrease_keys: u64,
    pub links: u64,
    pub comparisons: u64,
    pub delete_min_links: u64,
    pub delete_min_comparisons: u64,
}

impl Cell {
    fn from_metrics(workload: Workload, variant: VariantId, mode: Mode, n: usize, seed: u64, m: &Metrics) -> Self {
        let mut c = Cell {
            workload,
            variant,
            mode,
            n,
            seed,
            ops: m.per_op.len() as u64,
            inserts: 0,
            delete_mins: 0,
            decrease_keys: 0,
            links: m.links,
            comparisons: m.comparisons,
            delete_min_links: 0,
            delete_min_comparisons: 0,
        };
        for row in &m.per_op {
            match row.kind {
                OpKind::Insert => c.inserts += 1,
                OpKind::DecreaseKey => c.decrease_keys += 1,
                OpKind::DeleteMin => {
                    c.delete_mins += 1;
                    c.delete_min_links += row.links;
                    c.delete_min_comparisons += row.comparisons;
                }
                _ => {}
            }
        }
        c
    }
}

/// The random-mix workload: `n` prefill inserts, then `4n` ops drawn from
/// `weights` (insert:delete-min:decrease-key).
pub fn mix_trace(n: usize, weights: MixWeights, seed: u64) -> Trace {
    let cfg = RandomConfig {
        weights,
        n_ops: 4 * n,
        n_heaps: 1,
        key_range: (0, 1 << 40),
        prefill: n,
        distinct_keys: false,
    };
    gen_random_trace(&cfg, seed).expect("mix weights include inserts")
}

pub fn run_cell(workload: Workload, variant: VariantId, mode: Mode, n: usize, seed: u64, weights: MixWeights) -> Cell {
    let t = match workload {
        Workload::Sorting => gen_sorting_trace(n, seed),
        Workload::Mix => mix_trace(n, weights, seed),
    };
    let r = replay(&t, variant, mode, ReplayOptions::default()).expect("generated traces replay");
    Cell::from_metrics(workload, variant, mode, n, seed, &r.metrics)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub workload: Workload,
    pub variants: Vec<VariantId>,
    pub modes: Vec<Mode>,
    pub ns: Vec<usize>,
    pub seeds: Vec<u64>,
    pub weights: MixWeights,
}

impl SweepConfig {
    /// `n = 2^lo ..= 2^hi`.
    pub fn powers(workload: Workload, lo: u32, hi: u32, seeds: Vec<u64>) -> Self {
        SweepConfig {
            workload,
            variants: VariantId::ALL.to_vec(),
            modes: Mode::ALL.to_vec(),
            ns: (lo..=hi).map(|e| 1usize << e).collect(),
            seeds,
            weights: MixWeights::idk(1.0, 1.0, 8.0),
        }
    }
}

/// All cells, largest first for load balance, returned in grid order.
pub fn sweep(cfg: &SweepConfig) -> Vec<Cell> {
    let mut grid = Vec::new();
    for &v in &cfg.variants {
        for &m in &cfg.modes {
            for &n in &cfg.ns {
                for &s in &cfg.seeds {
                    grid.push((v, m, n, s));
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(grid[i].2));
    let mut done: Vec<(usize, Cell)> = order
        .par_iter()
        .map(|&i| {
            let (v, m, n, s) = grid[i];
            (i, run_cell(cfg.workload, v, m, n, s, cfg.weights))
        })
        .collect();
    done.sort_by_key(|(i, _)| *i);
    done.into_iter().map(|(_, c)| c).collect()
}

/// Seed-averaged costs at one n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub workload: Workload,
    pub variant: VariantId,
    pub mode: Mode,
    pub n: usize,
    pub seeds: usize,
    /// Links per delete-min.
    pub dm_links: f64,
    /// Comparisons per delete-min.
    pub dm_cmps: f64,
    /// Links per operation of any kind.
    pub links_per_op: f64,
    pub delete_mins: f64,
    pub decrease_keys: f64,
    pub links: f64,
}

impl Point {
    /// Links per decrease-key after taking away `c * lg n` per delete-min.
    pub fn dk_links(&self, c: f64) -> f64 {
        if self.decrease_keys == 0.0 {
            return 0.0;
        }
        (self.links - c * lg(self.n as f64) * self.delete_mins) / self.decrease_keys
    }
}

/// Pools the cells sharing (workload, variant, mode, n): ratios of summed
/// totals over the seeds.
pub fn points(cells: &[Cell]) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    let mut acc: Vec<(u64, u64, u64, u64, u64, u64)> = Vec::new();
    for c in cells {
        let i = match out
            .iter()
            .position(|p| p.workload == c.workload && p.variant == c.variant && p.mode == c.mode && p.n == c.n)
        {
            Some(i) => i,
            None => {
                out.push(Point {
                    workload: c.workload,
                    variant: c.variant,
                    mode: c.mode,
                    n: c.n,
                    seeds: 0,
                    dm_links: 0.0,
                    dm_cmps: 0.0,
                    links_per_op: 0.0,
                    delete_mins: 0.0,
                    decrease_keys: 0.0,
                    links: 0.0,
                });
                acc.push(Default::default());
                out.len() - 1
            }
        };
        out[i].seeds += 1;
        let a = &mut acc[i];
        a.0 += c.delete_min_links;
        a.1 += c.delete_min_comparisons;
        a.2 += c.delete_mins;
        a.3 += c.ops;
        a.4 += c.links;
        a.5 += c.decrease_keys;
    }
    for (p, a) in out.iter_mut().zip(acc) {
        let s = p.seeds as f64;
        let per = |x: u64, y: u64| if y == 0 { 0.0 } else { x as f64 / y as f64 };
        p.dm_links = per(a.0, a.2);
        p.dm_cmps = per(a.1, a.2);
        p.links_per_op = per(a.4, a.3);
        p.delete_mins = a.2 as f64 / s;
        p.decrease_keys = a.5 as f64 / s;
        p.links = a.4 as f64 / s;
    }
    out
}

pub const POINTS_CSV_HEADER: &str =
    "workload,variant,mode,n,seeds,dm_links,dm_cmps,links_per_op,delete_mins,decrease_keys,links";

pub fn points_csv(points: &[Point]) -> String {
    let mut s = String::from(POINTS_CSV_HEADER);
    s.push('\n');
    for p in points {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{:.6},{:.6},{:.6},{:.1},{:.1},{:.1}",
            p.workload.name(),
            p.variant,
            p.mode,
            p.n,
            p.seeds,
            p.dm_links,
            p.dm_cmps,
            p.links_per_op,
            p.delete_mins,
            p.decrease_keys,
            p.links
        );
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub workload: Workload,
    pub variant: VariantId,
    pub mode: Mode,
    /// What was fitted, e.g. `dm_links` or `dk_links`.
    pub quantity: String,
    pub fit: GrowthFit,
}

pub const FITS_CSV_HEADER: &str = "workload,variant,mode,quantity,model,coefficient,max_residual_ratio";

pub fn fits_csv(rows: &[FitRow]) -> String {
    let mut s = String::from(FITS_CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{:.6},{:.6}",
            r.workload.name(),
            r.variant,
            r.mode,
            r.quantity,
            r.fit.model.name(),
            r.fit.coefficient,
            r.fit.max_residual_ratio
        );
    }
    s
}

/// Fits `value(point)` against `model` separately for each (variant, mode).
pub fn fit_points(
    points: &[Point],
    quantity: &str,
    model: GrowthModel,
    value: impl Fn(&Point) -> f64,
) -> Result<Vec<FitRow>, MetricsError> {
    let mut keys: Vec<(Workload, VariantId, Mode)> = Vec::new();
    for p in points {
        if !keys.contains(&(p.workload, p.variant, p.mode)) {
            keys.push((p.workload, p.variant, p.mode));
        }
    }
    keys.into_iter()
        .map(|(w, v, m)| {
            let pts: Vec<(u64, f64)> = points
                .iter()
                .filter(|p| p.workload == w && p.variant == v && p.mode == m)
                .map(|p| (p.n as u64, value(p)))
                .collect();
            Ok(FitRow {
                workload: w,
                variant: v,
                mode: m,
                quantity: quantity.to_string(),
                fit: fit_growth(&pts, model)?,
            })
        })
        .collect()
}
