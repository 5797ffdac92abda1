use std::fmt::Write as _;

use super::{Op, Trace, TraceError, TraceModel};

const SEED_TAG: &str = "# seed ";
const META_TAG: &str = "# meta ";

/// Renders a trace, one op per line. The seed and generator description go
/// in two leading comment lines.
pub fn serialize_trace(t: &Trace) -> String {
    let mut out = String::with_capacity(t.ops.len() * 12 + 64);
    let _ = writeln!(out, "{SEED_TAG}{}", t.seed);
    let _ = writeln!(out, "{META_TAG}{}", t.meta);
    for op in &t.ops {
        let _ = match *op {
            Op::MakeHeap => writeln!(out, "H"),
            Op::Insert { heap, item, key } => writeln!(out, "I {heap} {item} {key}"),
            Op::FindMin { heap } => writeln!(out, "F {heap}"),
            Op::DeleteMin { heap } => writeln!(out, "D {heap}"),
            Op::Meld { heap, other } => writeln!(out, "M {heap} {other}"),
            Op::DecreaseKey { heap, item, key } => writeln!(out, "K {heap} {item} {key}"),
            Op::Delete { heap, item } => writeln!(out, "X {heap} {item}"),
        };
    }
    out
}

fn field<T: std::str::FromStr>(
    parts: &[&str],
    i: usize,
    line: usize,
    what: &str,
) -> Result<T, TraceError> {
    let s = parts.get(i).ok_or_else(|| TraceError::Syntax {
        line,
        msg: format!("missing {what}"),
    })?;
    s.parse().map_err(|_| TraceError::Syntax {
        line,
        msg: format!("bad {what} `{s}`"),
    })
}

/// Parses and validates a trace.
pub fn parse_trace(text: &str) -> Result<Trace, TraceError> {
    let mut trace = Trace::default();
    let mut model = TraceModel::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if let Some(rest) = raw.strip_prefix(SEED_TAG) {
            trace.seed = rest.trim().parse().map_err(|_| TraceError::Syntax {
                line,
                msg: format!("bad seed `{rest}`"),
            })?;
            continue;
        }
        if let Some(rest) = raw.strip_prefix(META_TAG) {
            trace.meta = rest.to_string();
            continue;
        }
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let parts: Vec<&str> = body.split_ascii_whitespace().collect();
        let arity = match parts[0] {
            "H" => 0,
            "F" | "D" => 1,
            "M" | "X" => 2,
            "I" | "K" => 3,
            other => {
                return Err(TraceError::Syntax {
                    line,
                    msg: format!("unknown op `{other}`"),
                })
            }
        };
        if parts.len() != arity + 1 {
            return Err(TraceError::Syntax {
                line,
                msg: format!("`{}` takes {arity} fields, got {}", parts[0], parts.len() - 1),
            });
        }
        let op = match parts[0] {
            "H" => Op::MakeHeap,
            "I" => Op::Insert {
                heap: field(&parts, 1, line, "heap")?,
                item: field(&parts, 2, line, "item")?,
                key: field(&parts, 3, line, "key")?,
            },
            "F" => Op::FindMin {
                heap: field(&parts, 1, line, "heap")?,
            },
            "D" => Op::DeleteMin {
                heap: field(&parts, 1, line, "heap")?,
            },
            "M" => Op::Meld {
                heap: field(&parts, 1, line, "heap")?,
                other: field(&parts, 2, line, "heap")?,
            },
            "K" => Op::DecreaseKey {
                heap: field(&parts, 1, line, "heap")?,
                item: field(&parts, 2, line, "item")?,
                key: field(&parts, 3, line, "key")?,
            },
            "X" => Op::Delete {
                heap: field(&parts, 1, line, "heap")?,
                item: field(&parts, 2, line, "item")?,
            },
            _ => unreachable!(),
        };
        model
            .apply(&op)
            .map_err(|msg| TraceError::Semantic { line, msg })?;
        trace.ops.push(op);
    }
    Ok(trace)
}
