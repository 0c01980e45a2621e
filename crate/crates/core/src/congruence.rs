//! Short congruence on paths and what it says about `MH_2`.
//!
//! Two paths differ by a `k`-short move when one is obtained from the other
//! by replacing a shortest subpath of length at most `k` with a different
//! shortest path between the same vertices. The `k`-short congruence is the
//! closure of these moves. `MH_{2,l}` is free with a basis read off the
//! classes of length-`l` paths under the `(l-1)`-short congruence.

use std::collections::{BTreeMap, HashMap};

use crate::digraph::{all_paths, enumerate_paths, Digraph, DistanceMatrix, Path, PathClass};
use crate::error::{Error, Result};

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Keeps the smaller index as root so roots are class minima.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Memoized lists of paths between two vertices of a given length.
struct PathCache<'a> {
    g: &'a Digraph,
    d: &'a DistanceMatrix,
    cache: HashMap<(usize, usize, usize), Vec<Path>>,
}

impl<'a> PathCache<'a> {
    fn new(g: &'a Digraph, d: &'a DistanceMatrix) -> Self {
        PathCache { g, d, cache: HashMap::new() }
    }

    fn get(&mut self, x: usize, y: usize, len: usize) -> &[Path] {
        let (g, d) = (self.g, self.d);
        self.cache.entry((x, y, len)).or_insert_with(|| enumerate_paths(g, d, x, y, len))
    }
}

/// Partition of the length-`l` paths under the `l_short`-short congruence.
#[derive(Debug, Clone)]
pub struct PathClassIndex {
    pub l: usize,
    pub l_short: usize,
    /// All paths considered, lexicographically ordered.
    pub paths: Vec<Path>,
    pub kinds: Vec<PathClass>,
    /// Class id of each path; ids are dense and ordered by smallest member.
    pub class_of: Vec<usize>,
    /// Members of each class, ascending.
    pub classes: Vec<Vec<usize>>,
}

impl PathClassIndex {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn index_of(&self, p: &[usize]) -> Option<usize> {
        self.paths.binary_search_by(|q| q.as_slice().cmp(p)).ok()
    }

    pub fn congruent(&self, p: &[usize], q: &[usize]) -> bool {
        match (self.index_of(p), self.index_of(q)) {
            (Some(i), Some(j)) => self.class_of[i] == self.class_of[j],
            _ => false,
        }
    }

    /// Class ids whose paths run from `x` to `y`.
    pub fn classes_between(&self, x: usize, y: usize) -> Vec<usize> {
        let mut ids: Vec<usize> = self
            .classes
            .iter()
            .enumerate()
            .filter(|(_, members)| {
                let p = &self.paths[members[0]];
                p[0] == x && p[p.len() - 1] == y
            })
            .map(|(i, _)| i)
            .collect();
        ids.sort_unstable();
        ids
    }

    /// Whether some member of the class is a non-minimal long path.
    pub fn has_non_minimal(&self, class: usize) -> bool {
        self.classes[class].iter().any(|&i| self.kinds[i] == PathClass::LongNonMinimal)
    }
}

/// Classes of length-`l` paths under the `l_short`-short congruence,
/// optionally only for paths from `x` to `y` (moves fix endpoints).
pub fn short_classes(g: &Digraph, l: usize, l_short: usize, endpoints: Option<(usize, usize)>) -> PathClassIndex {
    let d = g.distances();
    short_classes_with(g, &d, l, l_short, endpoints)
}

fn short_classes_with(
    g: &Digraph,
    d: &DistanceMatrix,
    l: usize,
    l_short: usize,
    endpoints: Option<(usize, usize)>,
) -> PathClassIndex {
    let paths = match endpoints {
        Some((x, y)) => enumerate_paths(g, d, x, y, l),
        None => all_paths(g, l),
    };
    let kinds: Vec<PathClass> = paths.iter().map(|p| d.classify(p)).collect();
    let index: HashMap<&[usize], usize> = paths.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let mut uf = UnionFind::new(paths.len());
    let mut cache = PathCache::new(g, d);
    for (i, p) in paths.iter().enumerate() {
        for start in 0..l {
            // length-1 subpaths are arrows and have no alternatives
            for k in 2..=l_short.min(l - start) {
                let (a, b) = (p[start], p[start + k]);
                if d.get(a, b) != Some(k) {
                    continue;
                }
                for alt in cache.get(a, b, k) {
                    if alt[..] == p[start..=start + k] {
                        continue;
                    }
                    let mut q = p[..start].to_vec();
                    q.extend_from_slice(alt);
                    q.extend_from_slice(&p[start + k + 1..]);
                    let j = index[q.as_slice()];
                    uf.union(i, j);
                }
            }
        }
    }
    let mut class_id = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = Vec::with_capacity(paths.len());
    for i in 0..paths.len() {
        let root = uf.find(i);
        let id = *class_id.entry(root).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[id].push(i);
        class_of.push(id);
    }
    PathClassIndex { l, l_short, paths, kinds, class_of, classes }
}

/// Basis of `MH_{2,l}`: differences of non-congruent shortest paths against
/// a chosen one, and classes of minimal long paths containing no
/// non-minimal member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mh2Basis {
    pub l: usize,
    /// Lexicographically least shortest path for each pair at distance `l`.
    pub chosen: BTreeMap<(usize, usize), Path>,
    /// `(s, s_xy)` with `s` the least member of a class other than that of `s_xy`.
    pub diff_generators: Vec<(Path, Path)>,
    /// Least member of each class of minimal long paths.
    pub long_generators: Vec<Path>,
}

impl Mh2Basis {
    pub fn rank(&self) -> usize {
        self.diff_generators.len() + self.long_generators.len()
    }

    pub fn rank_between(&self, x: usize, y: usize) -> usize {
        let ends = |p: &Path| p[0] == x && p[p.len() - 1] == y;
        self.diff_generators.iter().filter(|(s, _)| ends(s)).count()
            + self.long_generators.iter().filter(|p| ends(p)).count()
    }
}

fn basis_from_classes(d: &DistanceMatrix, idx: &PathClassIndex) -> Mh2Basis {
    let l = idx.l;
    let mut chosen = BTreeMap::new();
    let mut diff_generators = Vec::new();
    let mut long_generators = Vec::new();
    // classes are ordered by least member, and paths lexicographically, so
    // the first class seen for a pair holds the least path of that pair
    let mut first_class: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (c, members) in idx.classes.iter().enumerate() {
        let rep = &idx.paths[members[0]];
        let (x, y) = (rep[0], rep[l]);
        if d.get(x, y) == Some(l) {
            match first_class.get(&(x, y)) {
                None => {
                    first_class.insert((x, y), c);
                    chosen.insert((x, y), rep.clone());
                }
                Some(_) => diff_generators.push((rep.clone(), chosen[&(x, y)].clone())),
            }
        } else if !idx.has_non_minimal(c) {
            long_generators.push(rep.clone());
        }
    }
    diff_generators.sort();
    long_generators.sort();
    Mh2Basis { l, chosen, diff_generators, long_generators }
}

pub fn mh2_basis(g: &Digraph, l: usize) -> Mh2Basis {
    let d = g.distances();
    let idx = short_classes_with(g, &d, l, l.saturating_sub(1), None);
    basis_from_classes(&d, &idx)
}

/// Rank of the `(x, y)` component of `MH_{2,l}`.
pub fn mh2_rank(g: &Digraph, l: usize, x: usize, y: usize) -> usize {
    let d = g.distances();
    match d.get(x, y) {
        Some(dxy) if dxy <= l => {
            let idx = short_classes_with(g, &d, l, l.saturating_sub(1), Some((x, y)));
            basis_from_classes(&d, &idx).rank()
        }
        _ => 0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// Two shortest paths with the same endpoints that are not congruent.
    ShortestPair,
    /// A minimal long path not congruent to any non-minimal long path.
    BadMinimalLong,
}

impl WitnessKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessKind::ShortestPair => "shortest-pair",
            WitnessKind::BadMinimalLong => "bad-minimal-long",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub kind: WitnessKind,
    /// Path length at which the test failed.
    pub k: usize,
    pub paths: Vec<Path>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishReport {
    pub l: usize,
    pub holds: bool,
    pub witness: Option<Witness>,
}

/// Decides whether `MH_{2,k}` vanishes for every `k > l`.
///
/// Only `k <= diam + 1` needs checking, where `diam` is the largest finite
/// distance: shortest paths are no longer than `diam`, and a minimal long
/// path of length `k` has a shortest prefix of length `k - 1`. Beyond that
/// bound every long path is non-minimal and there are no shortest paths, so
/// the rank formula gives zero.
pub fn check_v(g: &Digraph, l: usize) -> VanishReport {
    let d = g.distances();
    let bound = d.finite_diameter() + 1;
    for k in l + 1..=bound {
        let idx = short_classes_with(g, &d, k, k - 1, None);
        if let Some(w) = first_witness(&d, &idx) {
            return VanishReport { l, holds: false, witness: Some(w) };
        }
    }
    VanishReport { l, holds: true, witness: None }
}

fn first_witness(d: &DistanceMatrix, idx: &PathClassIndex) -> Option<Witness> {
    let k = idx.l;
    let mut first_class: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (c, members) in idx.classes.iter().enumerate() {
        let rep = &idx.paths[members[0]];
        let (x, y) = (rep[0], rep[k]);
        if d.get(x, y) != Some(k) {
            continue;
        }
        if let Some(&c0) = first_class.get(&(x, y)) {
            let s = idx.paths[idx.classes[c0][0]].clone();
            return Some(Witness { kind: WitnessKind::ShortestPair, k, paths: vec![s, rep.clone()] });
        }
        first_class.insert((x, y), c);
    }
    for (i, p) in idx.paths.iter().enumerate() {
        if idx.kinds[i] == PathClass::LongMinimal && !idx.has_non_minimal(idx.class_of[i]) {
            return Some(Witness { kind: WitnessKind::BadMinimalLong, k, paths: vec![p.clone()] });
        }
    }
    None
}

/// Result of the bounded probe of the `tau^l` congruence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauReport {
    pub l: usize,
    pub bound: usize,
    /// Number of classes among paths of length `<= bound`, for every pair
    /// joined by at least one such path.
    pub class_counts: BTreeMap<(usize, usize), usize>,
}

impl TauReport {
    /// True when every pair has a single class within the bound. This is
    /// evidence of thinness, not a proof.
    pub fn thin_within_bound(&self) -> bool {
        self.class_counts.values().all(|&c| c <= 1)
    }
}

/// Closure of the moves that replace a subpath of length at most `l` by any
/// path of length at most `l` with the same endpoints, restricted to paths
/// of length at most `bound`.
pub fn tau_classes_bounded(g: &Digraph, l: usize, bound: usize) -> TauReport {
    let d = g.distances();
    let mut paths: Vec<Path> = (0..=bound).flat_map(|len| all_paths(g, len)).collect();
    paths.sort();
    let index: HashMap<&[usize], usize> = paths.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let mut uf = UnionFind::new(paths.len());
    let mut cache = PathCache::new(g, &d);
    for (i, p) in paths.iter().enumerate() {
        let len = p.len() - 1;
        for start in 0..len {
            for k in 1..=l.min(len - start) {
                let (a, b) = (p[start], p[start + k]);
                for alt_len in 0..=l {
                    if len - k + alt_len > bound {
                        break;
                    }
                    for alt in cache.get(a, b, alt_len) {
                        let mut q = p[..start].to_vec();
                        q.extend_from_slice(alt);
                        q.extend_from_slice(&p[start + k + 1..]);
                        if let Some(&j) = index.get(q.as_slice()) {
                            uf.union(i, j);
                        }
                    }
                }
            }
        }
    }
    let mut roots: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, p) in paths.iter().enumerate() {
        let root = uf.find(i);
        roots.entry((p[0], p[p.len() - 1])).or_default().push(root);
    }
    let class_counts = roots
        .into_iter()
        .map(|(pair, mut r)| {
            r.sort_unstable();
            r.dedup();
            (pair, r.len())
        })
        .collect();
    TauReport { l, bound, class_counts }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GirthReport {
    pub edge: (usize, usize),
    /// Length of the shortest cycle through the edge; `None` if there is none.
    pub girth: Option<usize>,
    /// `floor((girth + 1) / 2)`.
    pub l: Option<usize>,
    /// Rank of `MH_{2,l}`.
    pub mh2_rank: Option<usize>,
}

impl GirthReport {
    /// Whether the expected nonvanishing holds; `None` when there is no cycle.
    pub fn nonvanishing(&self) -> Option<bool> {
        self.mh2_rank.map(|r| r > 0)
    }
}

/// Shortest cycle through an undirected edge and the rank of `MH_2` at
/// half its length, rounded up.
pub fn girth_check(g: &Digraph, edge: (usize, usize)) -> Result<GirthReport> {
    if let Some((u, v)) = g.asymmetric_arrow() {
        return Err(Error::NotSymmetric(u, v));
    }
    let (u, v) = edge;
    if u >= g.vertex_count() || v >= g.vertex_count() || !g.has_arrow(u, v) {
        return Err(Error::NotAnEdge(u, v));
    }
    let rest = g.without_edge(u, v).distances();
    let girth = rest.get(v, u).map(|k| k + 1);
    let l = girth.map(|c| c.div_ceil(2));
    let mh2_rank = l.map(|l| mh2_basis(g, l).rank());
    Ok(GirthReport { edge, girth, l, mh2_rank })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Digraph {
        Digraph::symmetrize(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn square_classes_and_ranks() {
        let c4 = cycle(4);
        let idx = short_classes(&c4, 2, 1, None);
        assert_eq!(idx.class_count(), idx.paths.len());
        let b = mh2_basis(&c4, 2);
        assert_eq!((b.diff_generators.len(), b.long_generators.len()), (4, 8));
        assert_eq!(mh2_rank(&c4, 2, 0, 0), 2);
        assert_eq!(mh2_rank(&c4, 2, 0, 2), 1);
        assert_eq!(mh2_rank(&c4, 1, 0, 2), 0);
    }

    #[test]
    fn complete_digraph() {
        let k4 = Digraph::new(4, (0..4).flat_map(|u| (0..4).filter(move |&v| v != u).map(move |v| (u, v)))).unwrap();
        let idx = short_classes(&k4, 2, 2, None);
        assert_eq!(idx.class_count(), idx.paths.len());
        assert!(check_v(&k4, 2).holds);
        assert!(tau_classes_bounded(&k4, 2, 4).thin_within_bound());
    }

    #[test]
    fn path_graph_has_no_cycle() {
        let p = Digraph::symmetrize(3, [(0, 1), (1, 2)]).unwrap();
        let r = girth_check(&p, (0, 1)).unwrap();
        assert_eq!((r.girth, r.l, r.nonvanishing()), (None, None, None));
        assert!(matches!(girth_check(&p, (0, 2)), Err(Error::NotAnEdge(0, 2))));
        let directed = Digraph::new(2, [(0, 1)]).unwrap();
        assert!(matches!(girth_check(&directed, (0, 1)), Err(Error::NotSymmetric(0, 1))));
    }

    #[test]
    fn cycles_girth() {
        let r = girth_check(&cycle(5), (0, 1)).unwrap();
        assert_eq!((r.girth, r.l), (Some(5), Some(3)));
        assert!(r.nonvanishing().unwrap());
        let r = girth_check(&cycle(4), (2, 3)).unwrap();
        assert_eq!((r.girth, r.l, r.mh2_rank), (Some(4), Some(2), Some(12)));
    }

    #[test]
    fn single_arrow_tau() {
        let g = Digraph::new(2, [(0, 1)]).unwrap();
        let r = tau_classes_bounded(&g, 2, 3);
        assert!(r.thin_within_bound());
        assert_eq!(r.class_counts.len(), 3);
    }
}
