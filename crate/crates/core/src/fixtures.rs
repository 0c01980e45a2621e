//! Named digraphs and complexes used throughout the tests and the CLI.

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::simplicial::{extended_hasse, PureComplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureKind {
    Digraph,
    /// A pure complex, used as a digraph through its extended Hasse diagram.
    Complex,
}

#[derive(Debug, Clone, Copy)]
pub struct FixtureInfo {
    pub name: &'static str,
    pub kind: FixtureKind,
    pub description: &'static str,
}

pub const FIXTURES: &[FixtureInfo] = &[
    FixtureInfo { name: "D1", kind: FixtureKind::Digraph, description: "4-vertex digraph with MH_{3,4} = Z in component (a, b)" },
    FixtureInfo { name: "G2", kind: FixtureKind::Digraph, description: "7-vertex undirected graph with MH_{3,4} = Z in component (a, e)" },
    FixtureInfo { name: "CTR", kind: FixtureKind::Digraph, description: "6-vertex undirected graph failing (V_2)" },
    FixtureInfo { name: "C4", kind: FixtureKind::Digraph, description: "undirected 4-cycle" },
    FixtureInfo { name: "C5", kind: FixtureKind::Digraph, description: "undirected 5-cycle" },
    FixtureInfo { name: "C<n>", kind: FixtureKind::Digraph, description: "undirected n-cycle, n >= 3" },
    FixtureInfo { name: "P3", kind: FixtureKind::Digraph, description: "directed path 0 -> 1 -> 2" },
    FixtureInfo { name: "K4c", kind: FixtureKind::Digraph, description: "complete digraph on 4 vertices" },
    FixtureInfo { name: "ANN", kind: FixtureKind::Complex, description: "6-triangle annulus" },
    FixtureInfo { name: "DT3", kind: FixtureKind::Complex, description: "boundary of the 3-simplex" },
    FixtureInfo { name: "DT2", kind: FixtureKind::Complex, description: "boundary of the 2-simplex" },
    FixtureInfo { name: "PATH", kind: FixtureKind::Complex, description: "two edges sharing a vertex" },
    FixtureInfo { name: "WEDGE", kind: FixtureKind::Complex, description: "two triangles sharing a vertex" },
];

fn labeled(g: Digraph, labels: &[&str]) -> Digraph {
    g.with_labels(labels.iter().map(|s| s.to_string()).collect()).expect("label count")
}

/// Undirected cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> Result<Digraph> {
    if n < 3 {
        return Err(Error::UnknownFixture(format!("C{}", n)));
    }
    Digraph::symmetrize(n, (0..n).map(|i| (i, (i + 1) % n)))
}

fn d1() -> Digraph {
    let g = Digraph::new(4, [(0, 1), (1, 3), (3, 2), (1, 2), (2, 1), (0, 3), (3, 0)]).expect("valid");
    labeled(g, &["c0", "a", "c1", "b"])
}

fn g2() -> Digraph {
    // a b0 b1 c d0 d1 e
    let edges = [(3, 1), (1, 0), (0, 2), (2, 3), (3, 4), (4, 6), (6, 5), (5, 3), (1, 4), (0, 6), (2, 5)];
    labeled(Digraph::symmetrize(7, edges).expect("valid"), &["a", "b0", "b1", "c", "d0", "d1", "e"])
}

fn ctr() -> Digraph {
    Digraph::symmetrize(6, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 4), (3, 4), (3, 5), (4, 5)]).expect("valid")
}

pub fn fixture_complex(name: &str) -> Result<PureComplex> {
    let facets: Vec<Vec<usize>> = match name {
        "ANN" => vec![vec![0, 1, 3], vec![1, 3, 4], vec![1, 2, 4], vec![2, 4, 5], vec![0, 2, 5], vec![0, 3, 5]],
        "DT3" => vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        "DT2" => vec![vec![0, 1], vec![0, 2], vec![1, 2]],
        "PATH" => vec![vec![0, 1], vec![1, 2]],
        "WEDGE" => vec![vec![0, 1, 2], vec![0, 3, 4]],
        _ => return Err(Error::UnknownFixture(name.to_string())),
    };
    PureComplex::new(facets)
}

/// Any fixture as a digraph; complexes map to their extended Hasse diagram.
pub fn fixture_digraph(name: &str) -> Result<Digraph> {
    match name {
        "D1" => Ok(d1()),
        "G2" => Ok(g2()),
        "CTR" => Ok(ctr()),
        "P3" => Digraph::new(3, [(0, 1), (1, 2)]),
        "K4c" => Digraph::new(4, (0..4).flat_map(|u| (0..4).filter(move |&v| v != u).map(move |v| (u, v)))),
        _ => {
            if let Some(n) = name.strip_prefix('C').and_then(|s| s.parse::<usize>().ok()) {
                return cycle(n).map_err(|_| Error::UnknownFixture(name.to_string()));
            }
            fixture_complex(name).map(|k| extended_hasse(&k))
        }
    }
}

pub fn fixture_kind(name: &str) -> Option<FixtureKind> {
    if fixture_complex(name).is_ok() {
        Some(FixtureKind::Complex)
    } else if fixture_digraph(name).is_ok() {
        Some(FixtureKind::Digraph)
    } else {
        None
    }
}

/// Names of the concrete fixtures (the cycle pattern is represented by C4 and C5).
pub fn fixture_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|f| f.name).filter(|n| *n != "C<n>").collect()
}
