//! Finite digraphs without loops or multiple arrows, their distances, and
//! paths.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A path or vertex tuple, as the list of visited vertices.
pub type Path = Vec<usize>;

#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arrows: BTreeSet<(usize, usize)>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl Digraph {
    /// Validates an arrow list: no loops, no repeats, indices in range.
    pub fn new(vertex_count: usize, arrows: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in arrows {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange { index: w, count: vertex_count });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !set.insert((u, v)) {
                return Err(Error::DuplicateArrow(u, v));
            }
        }
        let mut out = vec![Vec::new(); vertex_count];
        let mut inn = vec![Vec::new(); vertex_count];
        for &(u, v) in &set {
            out[u].push(v);
            inn[v].push(u);
        }
        for l in inn.iter_mut() {
            l.sort_unstable();
        }
        Ok(Digraph { n: vertex_count, arrows: set, out, inn, labels: None })
    }

    /// Builds the symmetric digraph of an undirected edge list.
    pub fn symmetrize(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut arrows = Vec::new();
        for (u, v) in edges {
            arrows.push((u, v));
            arrows.push((v, u));
        }
        Digraph::new(vertex_count, arrows)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    /// Arrows in lexicographic order.
    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arrows.iter().copied()
    }

    pub fn has_arrow(&self, u: usize, v: usize) -> bool {
        self.arrows.contains(&(u, v))
    }

    /// Heads of arrows out of `v`, ascending.
    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Tails of arrows into `v`, ascending.
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Looks up a vertex by label, falling back to a decimal index.
    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        if let Some(l) = &self.labels {
            if let Some(i) = l.iter().position(|s| s == name) {
                return Some(i);
            }
        }
        name.parse::<usize>().ok().filter(|&i| i < self.n)
    }

    pub fn opposite(&self) -> Digraph {
        let mut g = Digraph::new(self.n, self.arrows.iter().map(|&(u, v)| (v, u)))
            .expect("reversal keeps a valid arrow set");
        g.labels = self.labels.clone();
        g
    }

    pub fn is_symmetric(&self) -> bool {
        self.arrows.iter().all(|&(u, v)| self.has_arrow(v, u))
    }

    /// First arrow whose reverse is missing, if any.
    pub fn asymmetric_arrow(&self) -> Option<(usize, usize)> {
        self.arrows.iter().copied().find(|&(u, v)| !self.has_arrow(v, u))
    }

    /// Removes the arrows `(u, v)` and `(v, u)` if present.
    pub fn without_edge(&self, u: usize, v: usize) -> Digraph {
        let mut g = Digraph::new(self.n, self.arrows.iter().copied().filter(|&a| a != (u, v) && a != (v, u)))
            .expect("subset of a valid arrow set");
        g.labels = self.labels.clone();
        g
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Digraph> {
        Digraph::new(self.n, self.arrows.iter().map(|&(u, v)| (perm[u], perm[v])))
    }

    /// All-pairs breadth-first distances.
    pub fn distances(&self) -> DistanceMatrix {
        let n = self.n;
        let mut d = vec![None; n * n];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..n {
            d[s * n + s] = Some(0);
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                let dv = d[s * n + v].expect("queued vertices are reached");
                for &w in &self.out[v] {
                    if d[s * n + w].is_none() {
                        d[s * n + w] = Some(dv + 1);
                        queue.push_back(w);
                    }
                }
            }
        }
        DistanceMatrix { n, d }
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph").field("vertices", &self.n).field("arrows", &self.arrows).finish()
    }
}

/// Shortest-path distances; `None` stands for infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<Option<usize>>,
}

impl DistanceMatrix {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize) -> Option<usize> {
        self.d[x * self.n + y]
    }

    /// Largest finite distance.
    pub fn finite_diameter(&self) -> usize {
        self.d.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Ordered pairs at distance exactly `k`, lexicographically.
    pub fn pairs_at(&self, k: usize) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n * n).filter(|&i| self.d[i] == Some(k)).map(|i| (i / n, i % n)).collect()
    }

    /// Norm of a vertex tuple: the sum of consecutive distances.
    pub fn norm(&self, tuple: &[usize]) -> Option<usize> {
        tuple.windows(2).try_fold(0usize, |acc, w| self.get(w[0], w[1]).map(|d| acc + d))
    }

    pub fn is_shortest(&self, path: &[usize]) -> bool {
        let (first, last) = (path[0], path[path.len() - 1]);
        self.get(first, last) == Some(path.len() - 1)
    }

    pub fn classify(&self, path: &[usize]) -> PathClass {
        let len = path.len() - 1;
        if self.is_shortest(path) {
            PathClass::Shortest
        } else if self.is_shortest(&path[..len]) && self.is_shortest(&path[1..]) {
            PathClass::LongMinimal
        } else {
            PathClass::LongNonMinimal
        }
    }
}

/// Shortest paths realize the distance between their endpoints; a long path
/// is minimal when both of its maximal proper subpaths are shortest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathClass {
    Shortest,
    LongMinimal,
    LongNonMinimal,
}

impl PathClass {
    pub fn is_long(self) -> bool {
        self != PathClass::Shortest
    }
}

/// All paths of length `len` from `x` to `y`, in lexicographic order.
pub fn enumerate_paths(g: &Digraph, d: &DistanceMatrix, x: usize, y: usize, len: usize) -> Vec<Path> {
    let mut out = Vec::new();
    if d.get(x, y).is_none_or(|dist| dist > len) {
        return out;
    }
    let mut stack = vec![x];
    extend_to(g, d, y, len, &mut stack, &mut out);
    out
}

fn extend_to(g: &Digraph, d: &DistanceMatrix, y: usize, len: usize, stack: &mut Path, out: &mut Vec<Path>) {
    let v = *stack.last().expect("nonempty");
    let remaining = len + 1 - stack.len();
    if remaining == 0 {
        if v == y {
            out.push(stack.clone());
        }
        return;
    }
    for &w in g.out_neighbors(v) {
        if d.get(w, y).is_some_and(|dw| dw < remaining) {
            stack.push(w);
            extend_to(g, d, y, len, stack, out);
            stack.pop();
        }
    }
}

/// All paths of length `len`, in lexicographic order.
pub fn all_paths(g: &Digraph, len: usize) -> Vec<Path> {
    let mut out = Vec::new();
    for x in 0..g.vertex_count() {
        let mut stack = vec![x];
        extend_free(g, len, &mut stack, &mut out);
    }
    out
}

fn extend_free(g: &Digraph, len: usize, stack: &mut Path, out: &mut Vec<Path>) {
    if stack.len() == len + 1 {
        out.push(stack.clone());
        return;
    }
    let v = *stack.last().expect("nonempty");
    for &w in g.out_neighbors(v) {
        stack.push(w);
        extend_free(g, len, stack, out);
        stack.pop();
    }
}

/// Serialized digraph description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDigraph {
    pub vertices: usize,
    pub arrows: Vec<[usize; 2]>,
    #[serde(default)]
    pub undirected: bool,
}

impl RawDigraph {
    pub fn validate(&self) -> Result<Digraph> {
        let pairs = self.arrows.iter().map(|a| (a[0], a[1]));
        if self.undirected {
            Digraph::symmetrize(self.vertices, pairs)
        } else {
            Digraph::new(self.vertices, pairs)
        }
    }

    pub fn from_digraph(g: &Digraph) -> RawDigraph {
        RawDigraph { vertices: g.vertex_count(), arrows: g.arrows().map(|(u, v)| [u, v]).collect(), undirected: false }
    }
}

/// Parses either the JSON form or a plain edge list with one `u v` arrow per
/// line (`#` starts a comment). The vertex count of an edge list is one more
/// than the largest index.
pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let raw: RawDigraph = serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        return raw.validate();
    }
    let mut arrows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parsed: Option<Vec<usize>> = fields.iter().map(|f| f.parse().ok()).collect();
        match parsed.as_deref() {
            Some([u, v]) => arrows.push((*u, *v)),
            _ => return Err(Error::Parse(format!("line {}: expected 'u v', got '{}'", lineno + 1, line))),
        }
    }
    let n = arrows.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    Digraph::new(n, arrows)
}
