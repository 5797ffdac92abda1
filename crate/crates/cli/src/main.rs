use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use selfheap::bench::{self, SweepConfig, Workload};
use selfheap::graph::{format_distances, parse_dimacs, reference_dijkstra, run_dijkstra};
use selfheap::metrics::{amortized_summary, summary_csv, GrowthModel};
use selfheap::trace::{
    gen_random_trace, gen_sorting_trace, parse_trace, replay, serialize_trace, MixWeights, Op, RandomConfig,
    ReplayOptions, Trace,
};
use selfheap::verify::{check_lemmas, compare_outputs, oracle_replay};
use selfheap::{Mode, VariantId};

// A closed stdout (e.g. piped into `head`) ends the process quietly.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        if write!(std::io::stdout().lock(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        if writeln!(std::io::stdout().lock(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

/// Self-adjusting heaps: traces, verification, growth benchmarks, Dijkstra.
#[derive(Parser, Debug)]
#[command(name = "selfheap", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Emit a trace.
    Gen(GenArgs),
    /// Replay a trace; print find-min/delete-min keys and per-op metrics.
    Replay(ReplayArgs),
    /// Replay a trace against the oracle and check the link lemmas.
    Verify(VerifyArgs),
    /// Sorting-mode and random-mix sweeps with growth fits.
    Bench(BenchArgs),
    /// Shortest-path distances from a DIMACS `.gr` file.
    Dijkstra(DijkstraArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Sorting,
    Random,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "random")]
    kind: GenKind,
    /// Items (sorting) or mixed ops (random).
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// insert:delete-min:decrease-key weights.
    #[arg(long, default_value = "5:3:2")]
    mix: Mix,
    #[arg(long, default_value_t = 0.0)]
    meld: f64,
    #[arg(long, default_value_t = 0.0)]
    delete: f64,
    #[arg(long, default_value_t = 1)]
    heaps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReplayArgs {
    trace: PathBuf,
    #[arg(long, default_value = "slim")]
    variant: VariantId,
    #[arg(long, default_value = "eager")]
    mode: Mode,
    /// Write the amortized summary CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    trace: PathBuf,
    /// Defaults to all variants.
    #[arg(long)]
    variant: Option<VariantId>,
    /// Defaults to both modes.
    #[arg(long)]
    mode: Option<Mode>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BenchWorkload {
    Sorting,
    Mix,
    Both,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "both")]
    workload: BenchWorkload,
    /// Largest n; the sweep covers powers of two from --min-n.
    #[arg(long, default_value_t = 1 << 14)]
    n: usize,
    #[arg(long, default_value_t = 1 << 10)]
    min_n: usize,
    /// First seed; --seeds consecutive seeds are used.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    #[arg(long, default_value = "1:1:8")]
    mix: Mix,
    #[arg(long)]
    variant: Option<VariantId>,
    #[arg(long)]
    mode: Option<Mode>,
    /// Points CSV; fits go to the same path with `.fits.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DijkstraArgs {
    graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    source: u32,
    #[arg(long, default_value = "slim")]
    variant: VariantId,
    #[arg(long, default_value = "eager")]
    mode: Mode,
    /// Compare against a reference Dijkstra on a plain binary heap.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Mix(MixWeights);

impl std::str::FromStr for Mix {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected i:d:k, got `{s}`"));
        }
        let w: Vec<f64> = parts
            .iter()
            .map(|p| p.parse::<f64>().map_err(|_| format!("bad weight `{p}`")))
            .collect::<Result<_, _>>()?;
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err("weights must be nonnegative".into());
        }
        Ok(Mix(MixWeights::idk(w[0], w[1], w[2])))
    }
}

enum Fail {
    /// Verification found a problem.
    Check(String),
    /// Bad input or I/O.
    Input(String),
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Fail> {
    fs::write(path, text).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn load_trace(path: &Path) -> Result<Trace, Fail> {
    parse_trace(&read(path)?).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Fail> {
    match out {
        Some(p) => write(p, text),
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

fn cmd_gen(a: GenArgs) -> Result<(), Fail> {
    let t = match a.kind {
        GenKind::Sorting => gen_sorting_trace(a.n, a.seed),
        GenKind::Random => {
            let cfg = RandomConfig {
                weights: MixWeights {
                    meld: a.meld,
                    delete: a.delete,
                    ..a.mix.0
                },
                n_ops: a.n,
                n_heaps: a.heaps,
                ..Default::default()
            };
            gen_random_trace(&cfg, a.seed).map_err(|e| Fail::Input(e.to_string()))?
        }
    };
    emit(a.out.as_deref(), &serialize_trace(&t))
}

fn cmd_replay(a: ReplayArgs) -> Result<(), Fail> {
    let t = load_trace(&a.trace)?;
    let r = replay(&t, a.variant, a.mode, ReplayOptions::default()).map_err(|e| Fail::Input(e.to_string()))?;
    let mut out = String::new();
    for o in &r.outputs {
        let tag = match t.ops[o.op] {
            Op::FindMin { .. } => "F",
            _ => "D",
        };
        match o.key {
            Some(k) => writeln!(out, "{tag} {k}"),
            None => writeln!(out, "{tag} EMPTY"),
        }
        .expect("string write");
    }
    out!("{out}");
    let csv = match amortized_summary(&r.metrics, None) {
        Ok(rows) => summary_csv(&rows),
        Err(_) => summary_csv(&[]),
    };
    match a.out {
        Some(p) => write(&p, &csv),
        None => {
            outln!("# links={} comparisons={} cuts={}", r.metrics.links, r.metrics.comparisons, r.metrics.cuts);
            out!("{csv}");
            Ok(())
        }
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Fail> {
    let t = load_trace(&a.trace)?;
    let oracle = oracle_replay(&t).map_err(|e| Fail::Input(e.to_string()))?;
    let variants = a.variant.map_or(VariantId::ALL.to_vec(), |v| vec![v]);
    let modes = a.mode.map_or(Mode::ALL.to_vec(), |m| vec![m]);
    let mut failed = 0;
    for &v in &variants {
        for &m in &modes {
            outln!("# {v} {m}");
            let r = replay(&t, v, m, ReplayOptions { record: true }).map_err(|e| Fail::Check(format!("{v} {m}: {e}")))?;
            match compare_outputs(&r.outputs, &oracle) {
                Ok(()) => outln!("ORACLE PASS outputs={}", oracle.len()),
                Err(msg) => {
                    failed += 1;
                    outln!("ORACLE FAIL {msg}");
                }
            }
            let report = check_lemmas(&t, &r, v).map_err(|e| Fail::Check(format!("{v} {m}: {e}")))?;
            out!("{report}");
            if !report.passed() {
                failed += 1;
            }
        }
    }
    if failed > 0 {
        return Err(Fail::Check(format!("{failed} failing checks")));
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Result<(), Fail> {
    if a.min_n < 8 || a.n < a.min_n {
        return Err(Fail::Input("need 8 <= --min-n <= --n".into()));
    }
    let ns: Vec<usize> = std::iter::successors(Some(a.min_n), |&n| n.checked_mul(2))
        .take_while(|&n| n <= a.n)
        .collect();
    if ns.len() < 2 {
        return Err(Fail::Input("the sweep needs at least two sizes".into()));
    }
    let base = SweepConfig {
        workload: Workload::Sorting,
        variants: a.variant.map_or(VariantId::ALL.to_vec(), |v| vec![v]),
        modes: a.mode.map_or(Mode::ALL.to_vec(), |m| vec![m]),
        ns,
        seeds: (a.seed..a.seed + a.seeds.max(1)).collect(),
        weights: a.mix.0,
    };
    let run_sorting = a.workload != BenchWorkload::Mix;
    let run_mix = a.workload != BenchWorkload::Sorting;
    let mut pts = Vec::new();
    let mut fits = Vec::new();
    let fit_err = |e: selfheap::metrics::MetricsError| Fail::Input(e.to_string());
    // the delete-min share subtracted from mix runs uses the sorting-mode
    // lg envelope, so the sorting sweep runs whenever the mix does
    let sorting = bench::points(&bench::sweep(&base));
    let dm_fits = bench::fit_points(&sorting, "dm_links", GrowthModel::Lg, |p| p.dm_links).map_err(fit_err)?;
    if run_sorting {
        pts.extend(sorting.iter().cloned());
        fits.extend(dm_fits.iter().cloned());
    }
    if run_mix {
        let mix = bench::points(&bench::sweep(&SweepConfig {
            workload: Workload::Mix,
            ..base.clone()
        }));
        fits.extend(bench::fit_points(&mix, "dm_links", GrowthModel::Lg, |p| p.dm_links).map_err(fit_err)?);
        for model in [GrowthModel::LgLg, GrowthModel::Lg] {
            for f in &dm_fits {
                let c = f.fit.coefficient;
                let cell: Vec<_> = mix
                    .iter()
                    .filter(|p| p.variant == f.variant && p.mode == f.mode)
                    .cloned()
                    .collect();
                fits.extend(bench::fit_points(&cell, "dk_links", model, |p| p.dk_links(c)).map_err(fit_err)?);
            }
        }
        pts.extend(mix);
    }
    let points_text = bench::points_csv(&pts);
    let fits_text = bench::fits_csv(&fits);
    match a.out {
        Some(p) => {
            write(&p, &points_text)?;
            let mut fp = p.into_os_string();
            fp.push(".fits.csv");
            write(Path::new(&fp), &fits_text)?;
            out!("{fits_text}");
        }
        None => {
            out!("{points_text}");
            outln!();
            out!("{fits_text}");
        }
    }
    Ok(())
}

fn cmd_dijkstra(a: DijkstraArgs) -> Result<(), Fail> {
    let g = parse_dimacs(&read(&a.graph)?).map_err(|e| Fail::Input(format!("{}: {e}", a.graph.display())))?;
    let r = run_dijkstra(&g, a.source, a.variant, a.mode).map_err(|e| Fail::Input(e.to_string()))?;
    emit(a.out.as_deref(), &format_distances(&r.dist))?;
    let m = &r.metrics;
    eprintln!(
        "# links={} comparisons={} inserts={} decrease_keys={} delete_mins={}",
        m.links,
        m.comparisons,
        m.count(selfheap::OpKind::Insert),
        m.count(selfheap::OpKind::DecreaseKey),
        m.count(selfheap::OpKind::DeleteMin)
    );
    if a.check {
        let want = reference_dijkstra(&g, a.source).map_err(|e| Fail::Input(e.to_string()))?;
        if let Some(v) = (0..want.len()).find(|&i| want[i] != r.dist[i]) {
            eprintln!("CHECK FAIL");
            return Err(Fail::Check(format!(
                "vertex {}: got {:?}, reference {:?}",
                v + 1,
                r.dist[v],
                want[v]
            )));
        }
        eprintln!("CHECK PASS");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Replay(a) => cmd_replay(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Dijkstra(a) => cmd_dijkstra(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Check(msg)) => {
            eprintln!("selfheap: {msg}");
            ExitCode::from(1)
        }
        Err(Fail::Input(msg)) => {
            eprintln!("selfheap: {msg}");
            ExitCode::from(2)
        }
    }
}
