use std::collections::BTreeMap;
use std::fmt::Write;

use magnihom::digraph::Digraph;
use magnihom::linalg::AbelianInvariants;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// A rendered command result. `csv` falls back to JSON when a command has
/// no natural tabular form.
pub struct Report {
    pub json: Value,
    pub csv: Option<String>,
    pub pretty: String,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string(&self.json).expect("values serialize"),
            Format::Csv => self.csv.clone().unwrap_or_else(|| serde_json::to_string(&self.json).expect("values serialize")),
            Format::Pretty => self.pretty.clone(),
        }
    }
}

/// Integers that fit in 64 bits become JSON numbers, larger ones strings.
pub fn big(b: &BigInt) -> Value {
    match b.to_u64() {
        Some(v) => json!(v),
        None => match b.to_i64() {
            Some(v) => json!(v),
            None => json!(b.to_string()),
        },
    }
}

pub fn cell(n: usize, l: usize, h: &AbelianInvariants) -> Value {
    json!({"n": n, "l": l, "free": h.free_rank, "torsion": h.torsion.iter().map(big).collect::<Vec<_>>()})
}

pub fn path(g: &Digraph, p: &[usize]) -> Value {
    json!(p.iter().map(|&v| g.label(v)).collect::<Vec<_>>())
}

pub fn path_text(g: &Digraph, p: &[usize]) -> String {
    format!("({})", p.iter().map(|&v| g.label(v)).collect::<Vec<_>>().join(","))
}

pub fn cells_json(entries: &BTreeMap<(usize, usize), AbelianInvariants>) -> Value {
    json!(entries.iter().filter(|(_, h)| !h.is_zero()).map(|(&(n, l), h)| cell(n, l, h)).collect::<Vec<_>>())
}

pub fn cells_csv(entries: &BTreeMap<(usize, usize), AbelianInvariants>) -> String {
    let mut out = String::from("n,l,free,torsion\n");
    for (&(n, l), h) in entries.iter().filter(|(_, h)| !h.is_zero()) {
        let t: Vec<String> = h.torsion.iter().map(|t| t.to_string()).collect();
        let _ = writeln!(out, "{},{},{},{}", n, l, h.free_rank, t.join(";"));
    }
    out
}

/// Rows indexed by `l`, columns by `n`; zero cells print as `.` and cells
/// with `n > l` are left blank.
pub fn cells_pretty(entries: &BTreeMap<(usize, usize), AbelianInvariants>, n_max: usize, l_max: usize) -> String {
    let mut grid: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["l\\n".to_string()];
    header.extend((0..=n_max).map(|n| n.to_string()));
    grid.push(header);
    for l in 0..=l_max {
        let mut row = vec![l.to_string()];
        for n in 0..=n_max {
            row.push(if n > l {
                String::new()
            } else {
                match entries.get(&(n, l)) {
                    Some(h) if !h.is_zero() => h.to_string(),
                    _ => ".".to_string(),
                }
            });
        }
        grid.push(row);
    }
    align(&grid)
}

pub fn align(grid: &[Vec<String>]) -> String {
    let cols = grid.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| grid.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in grid {
        let line: Vec<String> = row.iter().enumerate().map(|(c, s)| format!("{:>w$}", s, w = widths[c])).collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}
