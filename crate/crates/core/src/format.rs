//! Text and JSON renderings of Betti tables.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::engine::{polygon_hash, BettiTable, Provenance};
use crate::error::{Error, Result};
use crate::polygon::{LatticePoint, LatticePolygon};

/// The printed grid: rows `q = 0, 1, 2`, columns `0..=N−3`. Entries that
/// rest on a modular rank carry a trailing `*`; lines starting with `#`
/// are comments.
pub fn to_ascii(table: &BettiTable, comments: &[String]) -> String {
    let n = table.n;
    let cols = n.saturating_sub(2).max(1);
    let cell = |p: usize, q: usize| -> String {
        let v = table.entry(p, q);
        let star = match q {
            1 => table.starred_b(p),
            2 if p + 2 <= n => table.starred_c(n - 2 - p),
            _ => false,
        };
        if star {
            format!("{v}*")
        } else {
            v.to_string()
        }
    };
    let grid: Vec<Vec<String>> = (0..3).map(|q| (0..cols).map(|p| cell(p, q)).collect()).collect();
    let width = grid
        .iter()
        .flatten()
        .map(String::len)
        .chain((0..cols).map(|p| p.to_string().len()))
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    out.push_str("  ");
    for p in 0..cols {
        let _ = write!(out, " {:>width$}", p);
    }
    out.push('\n');
    for (q, row) in grid.iter().enumerate() {
        let _ = write!(out, "{q}:");
        for v in row {
            let _ = write!(out, " {v:>width$}");
        }
        out.push('\n');
    }
    out
}

/// Inverse of [`to_ascii`] on its own output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedTable {
    pub n: usize,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
    pub starred_b: Vec<usize>,
    pub starred_c: Vec<usize>,
}

pub fn parse_ascii(text: &str) -> Result<ParsedTable> {
    let mut header: Option<usize> = None;
    let mut rows: BTreeMap<usize, Vec<(u64, bool)>> = BTreeMap::new();
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if header.is_none() {
            let cols: Vec<usize> = t
                .split_whitespace()
                .map(|s| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad header {t:?}"))))
                .collect::<Result<_>>()?;
            if cols != (0..cols.len()).collect::<Vec<_>>() {
                return Err(Error::Parse(format!("column header {t:?} is not 0, 1, 2, ...")));
            }
            header = Some(cols.len());
            continue;
        }
        let (label, rest) = t
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("row without label: {t:?}")))?;
        let q: usize = label
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad row label {label:?}")))?;
        let cells = rest
            .split_whitespace()
            .map(|s| {
                let (num, star) = match s.strip_suffix('*') {
                    Some(x) => (x, true),
                    None => (s, false),
                };
                num.parse::<u64>()
                    .map(|v| (v, star))
                    .map_err(|_| Error::Parse(format!("bad entry {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.insert(q, cells);
    }
    let cols = header.ok_or_else(|| Error::Parse("no table found".into()))?;
    if rows.keys().copied().collect::<Vec<_>>() != vec![0, 1, 2] || rows.values().any(|r| r.len() != cols) {
        return Err(Error::Parse("expected rows 0, 1, 2 of equal length".into()));
    }
    let n = cols + 2;
    let len = n - 3;
    let b: Vec<u64> = (1..=len).map(|p| rows[&1][p].0).collect();
    let c: Vec<u64> = (1..=len).map(|l| rows[&2][n - 2 - l].0).collect();
    let starred_b = (1..=len).filter(|&p| rows[&1][p].1).collect();
    let starred_c = (1..=len).filter(|&l| rows[&2][n - 2 - l].1).collect();
    Ok(ParsedTable {
        n,
        b,
        c,
        starred_b,
        starred_c,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedValue {
    pub complex: String,
    pub l: usize,
    pub bidegree: [i64; 2],
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDocument {
    pub b: Vec<u64>,
    pub c: Vec<u64>,
    pub n: usize,
    pub prime: u64,
    pub polygon_hash: String,
    pub vertices: Vec<[i64; 2]>,
    pub provenance_b: Vec<Provenance>,
    pub provenance_c: Vec<Provenance>,
    pub starred_b: Vec<usize>,
    pub starred_c: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bigraded: Vec<BigradedValue>,
}

impl TableDocument {
    pub fn new(poly: &LatticePolygon, table: &BettiTable) -> TableDocument {
        let len = table.len();
        TableDocument {
            b: table.b.clone(),
            c: table.c.clone(),
            n: table.n,
            prime: table.prime.get() as u64,
            polygon_hash: polygon_hash(poly),
            vertices: poly.vertices().iter().map(|v| [v.x, v.y]).collect(),
            provenance_b: table.provenance_b.clone(),
            provenance_c: table.provenance_c.clone(),
            starred_b: (1..=len).filter(|&l| table.starred_b(l)).collect(),
            starred_c: (1..=len).filter(|&l| table.starred_c(l)).collect(),
            bigraded: table
                .bigraded
                .iter()
                .map(|((k, ab), v)| BigradedValue {
                    complex: k.name().to_string(),
                    l: k.index(),
                    bidegree: [ab.x, ab.y],
                    value: *v,
                })
                .collect(),
        }
    }
}

pub fn to_json(poly: &LatticePolygon, table: &BettiTable) -> String {
    serde_json::to_string_pretty(&TableDocument::new(poly, table)).expect("documents serialize")
}

/// Values on their lattice points, top row first, blanks off the support.
pub fn bigraded_grid(values: &BTreeMap<LatticePoint, u64>, support: &[LatticePoint]) -> String {
    let Some(ymax) = support.iter().map(|p| p.y).max() else {
        return String::new();
    };
    let ymin = support.iter().map(|p| p.y).min().unwrap();
    let xmin = support.iter().map(|p| p.x).min().unwrap();
    let width = support
        .iter()
        .map(|p| values.get(p).copied().unwrap_or(0).to_string().len())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for y in (ymin..=ymax).rev() {
        let mut row: Vec<&LatticePoint> = support.iter().filter(|p| p.y == y).collect();
        row.sort();
        let mut line = String::new();
        let mut x = xmin;
        for p in row {
            while x < p.x {
                line.push_str(&" ".repeat(width + 1));
                x += 1;
            }
            let _ = write!(line, "{:>width$} ", values.get(p).copied().unwrap_or(0));
            x += 1;
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{betti_table, EngineOptions};

    #[test]
    fn ascii_layout_and_round_trip() {
        let poly = LatticePolygon::upsilon(2);
        let t = betti_table(&poly, &EngineOptions::default()).unwrap();
        let text = to_ascii(&t, &["Upsilon_2".to_string()]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# Upsilon_2");
        assert_eq!(lines[3], "1:  0  7  8 3*  0");
        assert_eq!(lines[4], "2:  0  0 6*  8  3");
        let back = parse_ascii(&text).unwrap();
        assert_eq!((back.b, back.c), (t.b.clone(), t.c.clone()));
        assert_eq!((back.starred_b, back.starred_c), (vec![3], vec![3]));
    }

    #[test]
    fn trivial_table() {
        let poly = LatticePolygon::sigma(1);
        let t = betti_table(&poly, &EngineOptions::default()).unwrap();
        let text = to_ascii(&t, &[]);
        assert_eq!(text, "   0\n0: 1\n1: 0\n2: 0\n");
        let back = parse_ascii(&text).unwrap();
        assert_eq!(back.n, 3);
        assert!(back.b.is_empty());
    }

    #[test]
    fn json_fields() {
        let poly = LatticePolygon::upsilon(1);
        let t = betti_table(&poly, &EngineOptions::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json(&poly, &t)).unwrap();
        assert_eq!(v["b"], serde_json::json!([0]));
        assert_eq!(v["c"], serde_json::json!([1]));
        assert_eq!(v["provenance_c"], serde_json::json!(["crossfilled"]));
    }

    #[test]
    fn parse_errors() {
        assert!(parse_ascii("# nothing\n").is_err());
        assert!(parse_ascii("  0 1\n0: 1 0\n1: 0 x\n2: 0 0\n").is_err());
    }
}
