//! Directed graphs in DIMACS shortest-path format, Dijkstra over any heap
//! variant, and an independent reference Dijkstra on `std`'s binary heap.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arena::ItemId;
use crate::heap::{Heaps, Mode};
use crate::metrics::Metrics;
use crate::variants::VariantId;

/// Vertices are `1..=n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    pub n: usize,
    pub arcs: Vec<(u32, u32, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `p sp <n> <m>` problem line")]
    MissingProblem,
    #[error("problem line declares {declared} arcs, found {found}")]
    ArcCount { declared: usize, found: usize },
    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { line: usize, vertex: i64, n: usize },
    #[error("line {line}: negative weight {weight}")]
    NegativeWeight { line: usize, weight: i64 },
    #[error("source {0} is not a vertex")]
    BadSource(u32),
    #[error("path length overflows 63 bits")]
    Overflow,
}

pub fn parse_dimacs(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let parts: Vec<&str> = raw.split_ascii_whitespace().collect();
        let syntax = |msg: String| GraphError::Syntax { line, msg };
        match parts.first().copied() {
            None | Some("c") => {}
            Some("p") => {
                if header.is_some() {
                    return Err(syntax("second problem line".into()));
                }
                if parts.len() != 4 || parts[1] != "sp" {
                    return Err(syntax("expected `p sp <n> <m>`".into()));
                }
                let n = parts[2].parse().map_err(|_| syntax(format!("bad vertex count `{}`", parts[2])))?;
                let m = parts[3].parse().map_err(|_| syntax(format!("bad arc count `{}`", parts[3])))?;
                header = Some((n, m));
            }
            Some("a") => {
                let (n, _) = header.ok_or(GraphError::MissingProblem)?;
                if parts.len() != 4 {
                    return Err(syntax("expected `a <u> <v> <w>`".into()));
                }
                let num = |s: &str| s.parse::<i64>().map_err(|_| syntax(format!("bad number `{s}`")));
                let (u, v, w) = (num(parts[1])?, num(parts[2])?, num(parts[3])?);
                for vertex in [u, v] {
                    if vertex < 1 || vertex as u64 > n as u64 {
                        return Err(GraphError::VertexOutOfRange { line, vertex, n });
                    }
                }
                if w < 0 {
                    return Err(GraphError::NegativeWeight { line, weight: w });
                }
                arcs.push((u as u32, v as u32, w as u64));
            }
            Some(tag) => return Err(syntax(format!("unknown line type `{tag}`"))),
        }
    }
    let (n, m) = header.ok_or(GraphError::MissingProblem)?;
    if arcs.len() != m {
        return Err(GraphError::ArcCount {
            declared: m,
            found: arcs.len(),
        });
    }
    Ok(Graph { n, arcs })
}

pub fn to_dimacs(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * g.arcs.len() + 32);
    let _ = writeln!(out, "p sp {} {}", g.n, g.arcs.len());
    for &(u, v, w) in &g.arcs {
        let _ = writeln!(out, "a {u} {v} {w}");
    }
    out
}

/// Gilbert random digraph: each ordered pair of distinct vertices is an arc
/// with probability `p`, weights uniform in `0..=max_weight`.
pub fn gilbert(n: usize, p: f64, max_weight: u64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    let pairs = (n as u64) * (n as u64).saturating_sub(1);
    if p > 0.0 && pairs > 0 {
        let log_q = (1.0 - p.min(1.0)).ln();
        // walk the pair index with geometric skips
        let mut idx: u64 = 0;
        loop {
            let skip = if p >= 1.0 {
                0
            } else {
                let u: f64 = rng.random::<f64>();
                ((1.0 - u).ln() / log_q).floor() as u64
            };
            idx = match idx.checked_add(skip) {
                Some(i) if i < pairs => i,
                _ => break,
            };
            let u = idx / (n as u64 - 1);
            let mut v = idx % (n as u64 - 1);
            if v >= u {
                v += 1;
            }
            let w = rng.random_range(0..=max_weight);
            arcs.push((u as u32 + 1, v as u32 + 1, w));
            idx += 1;
        }
    }
    Graph { n, arcs }
}

fn adjacency(g: &Graph) -> (Vec<usize>, Vec<(u32, u64)>) {
    let mut start = vec![0usize; g.n + 2];
    for &(u, _, _) in &g.arcs {
        start[u as usize + 1] += 1;
    }
    for i in 1..start.len() {
        start[i] += start[i - 1];
    }
    let mut fill = start.clone();
    let mut out = vec![(0u32, 0u64); g.arcs.len()];
    for &(u, v, w) in &g.arcs {
        out[fill[u as usize]] = (v, w);
        fill[u as usize] += 1;
    }
    (start, out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DijkstraResult {
    /// `dist[v - 1]` for vertex `v`; `None` if unreachable.
    pub dist: Vec<Option<u64>>,
    pub metrics: Metrics,
}

/// Textbook Dijkstra: insert a vertex when first reached, decrease-key on a
/// strictly shorter path.
pub fn run_dijkstra(g: &Graph, source: u32, variant: VariantId, mode: Mode) -> Result<DijkstraResult, GraphError> {
    if source < 1 || source as usize > g.n {
        return Err(GraphError::BadSource(source));
    }
    let (start, adj) = adjacency(g);
    let mut dist: Vec<Option<u64>> = vec![None; g.n + 1];
    let mut item: Vec<Option<ItemId>> = vec![None; g.n + 1];
    let mut done = vec![false; g.n + 1];
    let mut vertex_at: Vec<u32> = Vec::new();
    let mut heaps = Heaps::new(variant, mode, false);
    let h = heaps.make_heap();

    let push = |heaps: &mut Heaps, vertex_at: &mut Vec<u32>, v: u32, d: u64| -> ItemId {
        let e = heaps.insert(h, d as i64).expect("dijkstra heap op");
        let slot = e.index() as usize;
        if vertex_at.len() <= slot {
            vertex_at.resize(slot + 1, 0);
        }
        vertex_at[slot] = v;
        e
    };
    dist[source as usize] = Some(0);
    item[source as usize] = Some(push(&mut heaps, &mut vertex_at, source, 0));
    while heaps.size(h).unwrap_or(0) > 0 {
        let (e, key) = heaps.delete_min(h).expect("dijkstra heap op");
        let u = vertex_at[e.index() as usize];
        let du = key.value().expect("finite key") as u64;
        done[u as usize] = true;
        item[u as usize] = None;
        for &(v, w) in &adj[start[u as usize]..start[u as usize + 1]] {
            if done[v as usize] {
                continue;
            }
            let nd = du.checked_add(w).filter(|&x| x <= i64::MAX as u64).ok_or(GraphError::Overflow)?;
            match (dist[v as usize], item[v as usize]) {
                (None, _) => {
                    dist[v as usize] = Some(nd);
                    item[v as usize] = Some(push(&mut heaps, &mut vertex_at, v, nd));
                }
                (Some(old), Some(ev)) if nd < old => {
                    dist[v as usize] = Some(nd);
                    heaps.decrease_key(h, ev, nd as i64).expect("dijkstra heap op");
                }
                _ => {}
            }
        }
    }
    dist.remove(0);
    Ok(DijkstraResult {
        dist,
        metrics: heaps.take_metrics(),
    })
}

/// Dijkstra on `std::collections::BinaryHeap` with lazy deletion; shares no
/// code with the heaps under test.
pub fn reference_dijkstra(g: &Graph, source: u32) -> Result<Vec<Option<u64>>, GraphError> {
    if source < 1 || source as usize > g.n {
        return Err(GraphError::BadSource(source));
    }
    let mut adj: Vec<Vec<(u32, u64)>> = vec![Vec::new(); g.n + 1];
    for &(u, v, w) in &g.arcs {
        adj[u as usize].push((v, w));
    }
    let mut dist: Vec<Option<u64>> = vec![None; g.n + 1];
    let mut pq = BinaryHeap::new();
    dist[source as usize] = Some(0);
    pq.push(Reverse((0u64, source)));
    while let Some(Reverse((d, u))) = pq.pop() {
        if dist[u as usize] != Some(d) {
            continue;
        }
        for &(v, w) in &adj[u as usize] {
            let nd = d.checked_add(w).ok_or(GraphError::Overflow)?;
            if dist[v as usize].is_none_or(|old| nd < old) {
                dist[v as usize] = Some(nd);
                pq.push(Reverse((nd, v)));
            }
        }
    }
    dist.remove(0);
    Ok(dist)
}

/// Distances as text, one per line, `INF` for unreachable vertices.
pub fn format_distances(dist: &[Option<u64>]) -> String {
    let mut out = String::with_capacity(dist.len() * 8);
    for d in dist {
        match d {
            Some(x) => {
                let _ = writeln!(out, "{x}");
            }
            None => out.push_str("INF\n"),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_small() {
        let g = parse_dimacs("c hello\np sp 2 1\na 1 2 7\n").unwrap();
        assert_eq!(g, Graph { n: 2, arcs: vec![(1, 2, 7)] });
        assert_eq!(parse_dimacs(&to_dimacs(&g)).unwrap(), g);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_dimacs("p sp 2 1\na 3 1 1\n"),
            Err(GraphError::VertexOutOfRange { line: 2, vertex: 3, .. })
        ));
        assert_eq!(
            parse_dimacs("p sp 2 2\na 1 2 1\n"),
            Err(GraphError::ArcCount { declared: 2, found: 1 })
        );
        assert_eq!(parse_dimacs("a 1 2 1\n"), Err(GraphError::MissingProblem));
        assert_eq!(parse_dimacs("c nothing\n"), Err(GraphError::MissingProblem));
        assert!(matches!(
            parse_dimacs("p sp 2 1\na 1 2 -4\n"),
            Err(GraphError::NegativeWeight { line: 2, weight: -4 })
        ));
        assert!(matches!(parse_dimacs("p sp 2 1\na 1 x 4\n"), Err(GraphError::Syntax { line: 2, .. })));
    }

    #[test]
    fn triangle() {
        let g = parse_dimacs("p sp 3 3\na 1 2 1\na 2 3 1\na 1 3 5\n").unwrap();
        for v in VariantId::ALL {
            for m in Mode::ALL {
                let r = run_dijkstra(&g, 1, v, m).unwrap();
                assert_eq!(r.dist, vec![Some(0), Some(1), Some(2)]);
                assert_eq!(r.metrics.count(crate::metrics::OpKind::DecreaseKey), 1);
            }
        }
        assert_eq!(reference_dijkstra(&g, 1).unwrap(), vec![Some(0), Some(1), Some(2)]);
    }

    #[test]
    fn single_and_disconnected() {
        let g = Graph { n: 1, arcs: vec![] };
        assert_eq!(run_dijkstra(&g, 1, VariantId::Slim, Mode::Eager).unwrap().dist, vec![Some(0)]);
        let g = parse_dimacs("p sp 3 1\na 1 2 4\n").unwrap();
        let d = run_dijkstra(&g, 1, VariantId::Smooth, Mode::Lazy).unwrap().dist;
        assert_eq!(d, vec![Some(0), Some(4), None]);
        assert_eq!(format_distances(&d), "0\n4\nINF\n");
        assert_eq!(run_dijkstra(&g, 4, VariantId::Slim, Mode::Eager), Err(GraphError::BadSource(4)));
    }

    #[test]
    fn random_graphs_match_reference() {
        for seed in 0..10 {
            let g = gilbert(200, 0.03, 1_000, seed);
            let want = reference_dijkstra(&g, 1).unwrap();
            for v in VariantId::ALL {
                for m in Mode::ALL {
                    assert_eq!(run_dijkstra(&g, 1, v, m).unwrap().dist, want, "{v} {m} seed {seed}");
                }
            }
        }
    }

    #[test]
    fn gilbert_density() {
        let g = gilbert(300, 0.05, 10, 3);
        let expect = 0.05 * 300.0 * 299.0;
        assert!((g.arcs.len() as f64 - expect).abs() < 0.1 * expect);
        assert!(g.arcs.iter().all(|&(u, v, w)| u != v && u >= 1 && v as usize <= 300 && w <= 10));
        assert_eq!(gilbert(300, 0.05, 10, 3), g);
        assert_eq!(gilbert(5, 1.0, 1, 0).arcs.len(), 20);
    }
}
