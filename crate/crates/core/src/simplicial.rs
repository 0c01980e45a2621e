//! Pure simplicial complexes, ranked posets, face lattices and the
//! magnitude homology of covering digraphs of ranked posets.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Deserialize;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::linalg::{homology_at, AbelianInvariants, IntMatrix, Ring};

pub type Face = Vec<usize>;

/// A pure simplicial complex stored as sorted vertex lists. The empty face
/// is implicit; the complex `{∅}` has dimension -1 and no other faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureComplex {
    dim: isize,
    facets: Vec<Face>,
    /// `faces[k]` lists the faces of dimension `k`, lexicographically.
    faces: Vec<Vec<Face>>,
}

impl PureComplex {
    pub fn new(facets: Vec<Vec<usize>>) -> Result<Self> {
        if facets.is_empty() {
            return Err(Error::EmptyComplex);
        }
        let mut clean = BTreeSet::new();
        for f in facets {
            if f.is_empty() {
                return Err(Error::EmptyFacet);
            }
            let mut s = f.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != f.len() {
                return Err(Error::RepeatedVertex);
            }
            clean.insert(s);
        }
        let facets: Vec<Face> = clean.into_iter().collect();
        let size = facets[0].len();
        if let Some(f) = facets.iter().find(|f| f.len() != size) {
            return Err(Error::NotPure(size - 1, f.len() - 1));
        }
        Ok(Self::from_sorted_facets(facets))
    }

    /// The complex whose only face is the empty one.
    pub fn empty_face() -> Self {
        PureComplex { dim: -1, facets: vec![Vec::new()], faces: Vec::new() }
    }

    fn from_sorted_facets(facets: Vec<Face>) -> Self {
        let dim = facets[0].len() as isize - 1;
        let mut by_dim: Vec<BTreeSet<Face>> = vec![BTreeSet::new(); facets[0].len()];
        for f in &facets {
            for mask in 1u64..(1u64 << f.len()) {
                let sub: Face = f.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
                by_dim[sub.len() - 1].insert(sub);
            }
        }
        PureComplex { dim, facets, faces: by_dim.into_iter().map(|s| s.into_iter().collect()).collect() }
    }

    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    /// Faces of dimension `k` (`K(k)`); empty outside `0..=dim`.
    pub fn faces_of_dim(&self, k: isize) -> &[Face] {
        if k < 0 {
            return &[];
        }
        self.faces.get(k as usize).map_or(&[], Vec::as_slice)
    }

    /// All nonempty faces by dimension, then lexicographically.
    pub fn faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().flatten()
    }

    pub fn face_count(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        face.is_empty() || self.faces_of_dim(face.len() as isize - 1).binary_search(&face.to_vec()).is_ok()
    }

    /// The link of a face: faces disjoint from it whose union with it is a face.
    pub fn link(&self, sigma: &[usize]) -> Result<PureComplex> {
        let mut s = sigma.to_vec();
        s.sort_unstable();
        if !self.contains(&s) {
            return Err(Error::NotAFace(s));
        }
        let facets: BTreeSet<Face> = self
            .facets
            .iter()
            .filter(|f| s.iter().all(|v| f.binary_search(v).is_ok()))
            .map(|f| f.iter().copied().filter(|v| s.binary_search(v).is_err()).collect())
            .collect();
        let facets: Vec<Face> = facets.into_iter().collect();
        if facets.iter().all(Vec::is_empty) {
            return Ok(PureComplex::empty_face());
        }
        Ok(Self::from_sorted_facets(facets))
    }

    /// Reduced homology `H̄_k` for `k = -1..=dim`; entry `i` holds degree `i - 1`.
    pub fn reduced_homology(&self, ring: Ring) -> Vec<AbelianInvariants> {
        reduced_homology_of(&self.faces, ring)
    }
}

/// Reduced homology of a simplicial complex given by its nonempty faces
/// grouped by dimension. Each face is an ordered vertex list; its faces are
/// obtained by deleting one entry, which must again be listed.
fn reduced_homology_of(faces: &[Vec<Face>], ring: Ring) -> Vec<AbelianInvariants> {
    // chain groups C_{-1}, C_0, ..., C_top with C_{-1} spanned by the empty face
    let mut groups: Vec<Vec<Face>> = vec![vec![Vec::new()]];
    groups.extend(faces.iter().cloned());
    while groups.len() > 1 && groups.last().is_some_and(Vec::is_empty) {
        groups.pop();
    }
    let boundary = |k: usize| -> IntMatrix {
        // columns: groups[k], rows: groups[k - 1]
        let lower = &groups[k - 1];
        let index: HashMap<&Face, usize> = lower.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut m = IntMatrix::zeros(lower.len(), groups[k].len());
        for (c, f) in groups[k].iter().enumerate() {
            for i in 0..f.len() {
                let mut g = f.clone();
                g.remove(i);
                let r = index[&g];
                m.set(r, c, if i % 2 == 0 { 1.into() } else { (-1).into() });
            }
        }
        m
    };
    let top = groups.len();
    let mut out = Vec::with_capacity(top);
    for k in 0..top {
        let d_out = if k == 0 { IntMatrix::zeros(0, groups[0].len()) } else { boundary(k) };
        let d_in = if k + 1 < top { boundary(k + 1) } else { IntMatrix::zeros(groups[k].len(), 0) };
        out.push(homology_at(&d_in, &d_out, ring).expect("simplicial boundary squares to zero"));
    }
    out
}

/// `H̄_k` from a reduced homology vector; zero outside the computed range.
pub fn reduced_at(h: &[AbelianInvariants], k: isize) -> AbelianInvariants {
    if k < -1 {
        return AbelianInvariants::zero();
    }
    h.get((k + 1) as usize).cloned().unwrap_or_else(AbelianInvariants::zero)
}

#[derive(Debug, Deserialize)]
struct RawComplex {
    facets: Vec<Vec<usize>>,
}

/// Parses `{"facets": [[v, ...], ...]}`.
pub fn parse_complex(text: &str) -> Result<PureComplex> {
    let raw: RawComplex = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    PureComplex::new(raw.facets)
}

/// A finite ranked poset given by its covering relation.
#[derive(Debug, Clone)]
pub struct RankedPoset {
    size: usize,
    covers: Vec<(usize, usize)>,
    rank: Vec<usize>,
    /// `below[y]` is the set of `x` with `x < y`.
    below: Vec<BTreeSet<usize>>,
    labels: Option<Vec<String>>,
}

impl RankedPoset {
    /// `covers` lists pairs `(x, y)` where `y` covers `x`.
    pub fn from_covers(size: usize, covers: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyPoset);
        }
        let covers: Vec<(usize, usize)> = covers.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let g = Digraph::new(size, covers.iter().copied())?;
        // topological order; a cycle means the relation is not an order
        let mut indeg: Vec<usize> = (0..size).map(|v| g.in_neighbors(v).len()).collect();
        let mut queue: VecDeque<usize> = (0..size).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(size);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in g.out_neighbors(v) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if order.len() != size {
            return Err(Error::NotRanked("covering relation has a cycle".into()));
        }
        let mut rank = vec![0usize; size];
        let mut below: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); size];
        for &y in &order {
            let preds = g.in_neighbors(y);
            if let Some(&x0) = preds.first() {
                rank[y] = rank[x0] + 1;
                if preds.iter().any(|&x| rank[x] + 1 != rank[y]) {
                    return Err(Error::NotRanked(format!("element {} has covers of different ranks", y)));
                }
            }
            let mut b = BTreeSet::new();
            for &x in preds {
                b.insert(x);
                b.extend(below[x].iter().copied());
            }
            below[y] = b;
        }
        for &(x, y) in &covers {
            if g.in_neighbors(y).iter().any(|&z| z != x && below[z].contains(&x)) {
                return Err(Error::NotRanked(format!("({}, {}) is not a covering pair", x, y)));
            }
        }
        let tops: BTreeSet<usize> = (0..size).filter(|&v| g.out_neighbors(v).is_empty()).map(|v| rank[v]).collect();
        if tops.len() > 1 {
            return Err(Error::NotRanked("maximal chains of different lengths".into()));
        }
        Ok(RankedPoset { size, covers, rank, below, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::DimensionMismatch(format!("{} labels for {} elements", labels.len(), self.size)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rank(&self, x: usize) -> usize {
        self.rank[x]
    }

    pub fn dim(&self) -> usize {
        self.rank.iter().copied().max().unwrap_or(0)
    }

    pub fn less(&self, x: usize, y: usize) -> bool {
        self.below[y].contains(&x)
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Elements strictly between `x` and `y`.
    pub fn open_interval(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.size).filter(|&z| self.less(x, z) && self.less(z, y)).collect()
    }

    /// Reduced homology of the order complex of `]x, y[`, built from strict
    /// chains; entry `i` holds degree `i - 1`.
    pub fn interval_homology(&self, x: usize, y: usize, ring: Ring) -> Vec<AbelianInvariants> {
        let elems = self.open_interval(x, y);
        let mut chains: Vec<Vec<Face>> = Vec::new();
        let mut current: Vec<Face> = elems.iter().map(|&z| vec![z]).collect();
        while !current.is_empty() {
            let next: Vec<Face> = current
                .iter()
                .flat_map(|c| {
                    let last = *c.last().expect("nonempty chain");
                    elems.iter().filter(move |&&z| self.less(last, z)).map(move |&z| {
                        let mut e = c.clone();
                        e.push(z);
                        e
                    })
                })
                .collect();
            chains.push(std::mem::replace(&mut current, next));
        }
        reduced_homology_of(&chains, ring)
    }
}

/// The digraph with an arrow `x -> y` whenever `y` covers `x`.
pub fn hasse_digraph(p: &RankedPoset) -> Digraph {
    let g = Digraph::new(p.size, p.covers.iter().copied()).expect("validated covers");
    match &p.labels {
        Some(l) => g.with_labels(l.clone()).expect("label count checked"),
        None => g,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LatticeElement {
    Bottom,
    Face(Face),
    Top,
}

impl LatticeElement {
    pub fn label(&self) -> String {
        match self {
            LatticeElement::Bottom => "0^".into(),
            LatticeElement::Top => "1^".into(),
            LatticeElement::Face(f) => {
                let parts: Vec<String> = f.iter().map(|v| v.to_string()).collect();
                format!("{{{}}}", parts.join(","))
            }
        }
    }
}

/// Faces of a complex with a bottom and a top adjoined, ordered by
/// inclusion. Element 0 is the bottom, then faces by dimension, and the top
/// comes last.
#[derive(Debug, Clone)]
pub struct FaceLattice {
    pub elements: Vec<LatticeElement>,
    pub poset: RankedPoset,
}

impl FaceLattice {
    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn index_of(&self, face: &[usize]) -> Option<usize> {
        let f = LatticeElement::Face(face.to_vec());
        self.elements.iter().position(|e| *e == f)
    }
}

pub fn face_lattice(k: &PureComplex) -> FaceLattice {
    let mut elements = vec![LatticeElement::Bottom];
    elements.extend(k.faces().cloned().map(LatticeElement::Face));
    elements.push(LatticeElement::Top);
    let index: HashMap<&LatticeElement, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let top = elements.len() - 1;
    let mut covers = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        if let LatticeElement::Face(f) = e {
            if f.len() == 1 {
                covers.push((0, i));
            } else {
                for j in 0..f.len() {
                    let mut g = f.clone();
                    g.remove(j);
                    covers.push((index[&LatticeElement::Face(g)], i));
                }
            }
            if f.len() as isize == k.dim() + 1 {
                covers.push((i, top));
            }
        }
    }
    if k.dim() < 0 {
        covers.push((0, top));
    }
    let labels = elements.iter().map(LatticeElement::label).collect();
    let poset = RankedPoset::from_covers(elements.len(), covers)
        .and_then(|p| p.with_labels(labels))
        .expect("face lattices are ranked");
    FaceLattice { elements, poset }
}

/// Covering digraph of the face lattice.
pub fn extended_hasse(k: &PureComplex) -> Digraph {
    hasse_digraph(&face_lattice(k).poset)
}

/// `MH_{n,l}` of the covering digraph in component `(x, y)`, read off from
/// the homology of the open interval.
pub fn ranked_poset_mh(p: &RankedPoset, n: usize, l: usize, x: usize, y: usize, ring: Ring) -> AbelianInvariants {
    if l == 0 {
        return if n == 0 && x == y { AbelianInvariants::free(1) } else { AbelianInvariants::zero() };
    }
    if n == 0 || !p.less(x, y) || p.rank(y) - p.rank(x) != l {
        return AbelianInvariants::zero();
    }
    reduced_at(&p.interval_homology(x, y, ring), n as isize - 2)
}

/// `D(n) = Σ_{i=0}^{d-n+1} C(n+i, i) |K(n+i-1)|`.
pub fn d_count(k: &PureComplex, n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let d = k.dim();
    let top = d - n as isize + 1;
    (0..=top)
        .map(|i| binomial(n + i as usize, i as usize) * k.faces_of_dim(n as isize + i - 1).len())
        .sum()
}

/// Direct census of the pairs contributing `D(n)`: the bottom below faces of
/// dimension `n - 1`, and nested faces whose dimensions differ by `n`.
pub fn d_census(k: &PureComplex, n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let mut count = k.faces_of_dim(n as isize - 1).len();
    for tau in k.faces() {
        for sigma in k.faces_of_dim(tau.len() as isize - 1 - n as isize) {
            if sigma.iter().all(|v| tau.binary_search(v).is_ok()) {
                count += 1;
            }
        }
    }
    count
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Closed-form `MH_{n,l}` of the extended Hasse diagram.
pub fn hasse_mh_formula(k: &PureComplex, n: usize, l: usize, ring: Ring) -> AbelianInvariants {
    let d = k.dim();
    if l == 0 {
        return if n == 0 { AbelianInvariants::free(k.face_count() + 2) } else { AbelianInvariants::zero() };
    }
    let hn = n as isize - 2;
    if l as isize == d + 2 {
        return reduced_at(&k.reduced_homology(ring), hn);
    }
    let link_part: AbelianInvariants = k
        .faces_of_dim(d + 1 - l as isize)
        .iter()
        .map(|s| reduced_at(&k.link(s).expect("face of the complex").reduced_homology(ring), hn))
        .sum();
    if n == l {
        link_part.direct_sum(&AbelianInvariants::free(d_count(k, n)))
    } else {
        link_part
    }
}

/// Per-face check that the reduced homology of each link sits in its top
/// dimension only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopConcentration {
    pub faces: Vec<(Face, bool)>,
    /// Whether the complex itself has reduced homology only in dimension `d`.
    pub complex: bool,
}

impl TopConcentration {
    pub fn overall(&self) -> bool {
        self.faces.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<&Face> {
        self.faces.iter().filter(|(_, ok)| !ok).map(|(f, _)| f).collect()
    }
}

fn concentrated(h: &[AbelianInvariants], dim: isize) -> bool {
    h.iter().enumerate().all(|(i, a)| i as isize - 1 == dim || a.is_zero())
}

pub fn top_concentration_check(k: &PureComplex) -> TopConcentration {
    use rayon::prelude::*;
    let all: Vec<&Face> = k.faces().collect();
    let faces = all
        .par_iter()
        .map(|f| {
            let lk = k.link(f).expect("face of the complex");
            ((*f).clone(), concentrated(&lk.reduced_homology(Ring::Z), lk.dim()))
        })
        .collect();
    TopConcentration { faces, complex: concentrated(&k.reduced_homology(Ring::Z), k.dim()) }
}

/// Summary of the closed-form table next to a directly computed one.
pub fn formula_table(k: &PureComplex, n_max: usize, l_max: usize, ring: Ring) -> BTreeMap<(usize, usize), AbelianInvariants> {
    let mut out = BTreeMap::new();
    for l in 0..=l_max {
        for n in 0..=n_max {
            let v = hasse_mh_formula(k, n, l, ring);
            if !v.is_zero() {
                out.insert((n, l), v);
            }
        }
    }
    out
}
