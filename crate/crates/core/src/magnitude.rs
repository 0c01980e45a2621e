//! Magnitude chain complexes and their homology.
//!
//! `MC_{n,l}` is spanned by vertex tuples `(x_0, ..., x_n)` with distinct
//! consecutive entries whose consecutive distances sum to `l`. The
//! differential deletes interior entries, keeping a face only when the norm
//! is unchanged. Interior deletions fix the endpoints, so the complex splits
//! into directed components indexed by `(x_0, x_n)`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::digraph::{Digraph, DistanceMatrix, Path};
use crate::error::Result;
use crate::linalg::{homology_at, AbelianInvariants, IntMatrix, Ring};

/// Endpoint filter: `None` means the whole complex.
pub type Component = Option<(usize, usize)>;

/// Ordered basis of `MC_{n,l}`, optionally restricted to one component.
#[derive(Debug, Clone)]
pub struct MagBasis {
    pub n: usize,
    pub l: usize,
    pub component: Component,
    pub tuples: Vec<Path>,
    index: HashMap<Path, usize>,
}

impl MagBasis {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn position(&self, tuple: &[usize]) -> Option<usize> {
        self.index.get(tuple).copied()
    }
}

/// Tuples of length `n` and norm `l`, lexicographically ordered.
pub fn mc_basis(d: &DistanceMatrix, n: usize, l: usize, component: Component) -> MagBasis {
    let mut tuples = Vec::new();
    if n <= l {
        let starts: Vec<usize> = match component {
            Some((x, _)) => vec![x],
            None => (0..d.vertex_count()).collect(),
        };
        let target = component.map(|(_, y)| y);
        for x in starts {
            if let Some(y) = target {
                if d.get(x, y).is_none_or(|dxy| dxy > l) {
                    continue;
                }
            }
            let mut stack = vec![x];
            extend_tuple(d, n, l, target, &mut stack, 0, &mut tuples);
        }
    }
    let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    MagBasis { n, l, component, tuples, index }
}

fn extend_tuple(
    d: &DistanceMatrix,
    n: usize,
    l: usize,
    target: Option<usize>,
    stack: &mut Path,
    norm: usize,
    out: &mut Vec<Path>,
) {
    let v = *stack.last().expect("nonempty");
    if stack.len() == n + 1 {
        if norm == l && target.is_none_or(|y| y == v) {
            out.push(stack.clone());
        }
        return;
    }
    // steps still to place after the one chosen now
    let rest = n - stack.len();
    for w in 0..d.vertex_count() {
        if w == v {
            continue;
        }
        let Some(dw) = d.get(v, w) else { continue };
        let nn = norm + dw;
        if nn + rest > l {
            continue;
        }
        if rest == 0 {
            if nn != l || target.is_some_and(|y| y != w) {
                continue;
            }
        } else if let Some(y) = target {
            match d.get(w, y) {
                Some(dy) if nn + dy <= l => {}
                _ => continue,
            }
        }
        stack.push(w);
        extend_tuple(d, n, l, target, stack, nn, out);
        stack.pop();
    }
}

/// Matrix of the differential `MC_{n,l} -> MC_{n-1,l}` in the given bases
/// (rows index `lower`, columns index `upper`).
pub fn boundary_between(d: &DistanceMatrix, upper: &MagBasis, lower: &MagBasis) -> IntMatrix {
    let mut m = IntMatrix::zeros(lower.len(), upper.len());
    let n = upper.n;
    for (col, t) in upper.tuples.iter().enumerate() {
        for i in 1..n {
            let (a, b, c) = (t[i - 1], t[i], t[i + 1]);
            let (Some(ab), Some(bc)) = (d.get(a, b), d.get(b, c)) else { continue };
            if d.get(a, c) != Some(ab + bc) {
                continue;
            }
            let mut face = t.clone();
            face.remove(i);
            let row = lower.position(&face).expect("norm-preserving face lies in the lower basis");
            let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let cur = m.get(row, col) + sign;
            m.set(row, col, cur);
        }
    }
    m
}

pub fn boundary(d: &DistanceMatrix, n: usize, l: usize, component: Component) -> IntMatrix {
    let upper = mc_basis(d, n, l, component);
    if n == 0 {
        return IntMatrix::zeros(0, upper.len());
    }
    let lower = mc_basis(d, n - 1, l, component);
    boundary_between(d, &upper, &lower)
}

/// The complex `MC_{*,l}` (restricted to a component) in degrees
/// `0..=top+1`, with all bases and differentials.
#[derive(Debug, Clone)]
pub struct ComplexSlice {
    pub l: usize,
    pub bases: Vec<MagBasis>,
    /// `differentials[n]` is `d_n: MC_n -> MC_{n-1}`; entry 0 is the zero map.
    pub differentials: Vec<IntMatrix>,
}

impl ComplexSlice {
    pub fn build(d: &DistanceMatrix, l: usize, top: usize, component: Component) -> ComplexSlice {
        let max_n = (top + 1).min(l);
        let bases: Vec<MagBasis> = (0..=max_n).map(|n| mc_basis(d, n, l, component)).collect();
        let mut differentials = vec![IntMatrix::zeros(0, bases[0].len())];
        for n in 1..=max_n {
            differentials.push(boundary_between(d, &bases[n], &bases[n - 1]));
        }
        ComplexSlice { l, bases, differentials }
    }

    pub fn homology(&self, n: usize, ring: Ring) -> Result<AbelianInvariants> {
        if n >= self.bases.len() {
            return Ok(AbelianInvariants::zero());
        }
        let d_out = &self.differentials[n];
        let d_in = match self.differentials.get(n + 1) {
            Some(m) => m.clone(),
            // beyond the stored range MC vanishes (n + 1 > l)
            None => IntMatrix::zeros(self.bases[n].len(), 0),
        };
        homology_at(&d_in, d_out, ring)
    }

    pub fn rank(&self, n: usize) -> usize {
        self.bases.get(n).map_or(0, MagBasis::len)
    }
}

/// `MH_{n,l}` computed on the undecomposed complex (or one component).
pub fn mh(g: &Digraph, n: usize, l: usize, ring: Ring, component: Component) -> Result<AbelianInvariants> {
    if n > l {
        return Ok(AbelianInvariants::zero());
    }
    let d = g.distances();
    ComplexSlice::build(&d, l, n, component).homology(n, ring)
}

/// Components `(x, y)` that can carry tuples of norm `l`.
pub fn live_components(d: &DistanceMatrix, l: usize) -> Vec<(usize, usize)> {
    let n = d.vertex_count();
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| d.get(x, y).is_some_and(|dxy| dxy <= l) && (l > 0 || x == y))
        .collect()
}

/// A table of homology groups indexed by `(n, l)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigradedTable {
    pub ring: Ring,
    pub component: Component,
    pub entries: BTreeMap<(usize, usize), AbelianInvariants>,
}

impl BigradedTable {
    pub fn get(&self, n: usize, l: usize) -> AbelianInvariants {
        self.entries.get(&(n, l)).cloned().unwrap_or_default()
    }

    /// Nonzero entries in `(n, l)` order.
    pub fn nonzero(&self) -> impl Iterator<Item = (&(usize, usize), &AbelianInvariants)> {
        self.entries.iter().filter(|(_, v)| !v.is_zero())
    }
}

/// Full table for `n <= n_max`, `l <= l_max`, assembled from directed
/// components computed in parallel. Cells with `n > l` are absent.
pub fn mh_table(g: &Digraph, n_max: usize, l_max: usize, ring: Ring) -> Result<BigradedTable> {
    let d = g.distances();
    let tasks: Vec<(usize, (usize, usize))> =
        (0..=l_max).flat_map(|l| live_components(&d, l).into_iter().map(move |c| (l, c))).collect();
    let pieces: Vec<(usize, Vec<AbelianInvariants>)> = tasks
        .par_iter()
        .map(|&(l, c)| {
            let slice = ComplexSlice::build(&d, l, n_max, Some(c));
            let groups = (0..=n_max.min(l)).map(|n| slice.homology(n, ring)).collect::<Result<Vec<_>>>()?;
            Ok((l, groups))
        })
        .collect::<Result<_>>()?;
    let mut acc: BTreeMap<(usize, usize), Vec<AbelianInvariants>> = BTreeMap::new();
    for l in 0..=l_max {
        for n in 0..=n_max.min(l) {
            acc.insert((n, l), Vec::new());
        }
    }
    for (l, groups) in pieces {
        for (n, h) in groups.into_iter().enumerate() {
            acc.get_mut(&(n, l)).expect("cell allocated").push(h);
        }
    }
    let entries = acc.into_iter().map(|(k, v)| (k, v.into_iter().sum())).collect();
    Ok(BigradedTable { ring, component: None, entries })
}

/// Table of one directed component.
pub fn mh_table_component(
    g: &Digraph,
    n_max: usize,
    l_max: usize,
    ring: Ring,
    component: (usize, usize),
) -> Result<BigradedTable> {
    let d = g.distances();
    let cells: Vec<Vec<((usize, usize), AbelianInvariants)>> = (0..=l_max)
        .into_par_iter()
        .map(|l| {
            let slice = ComplexSlice::build(&d, l, n_max, Some(component));
            (0..=n_max.min(l)).map(|n| Ok(((n, l), slice.homology(n, ring)?))).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(BigradedTable { ring, component: Some(component), entries: cells.into_iter().flatten().collect() })
}

/// Nonzero directed components of `MH_{n,l}`.
pub fn mh_components(
    g: &Digraph,
    n: usize,
    l: usize,
    ring: Ring,
) -> Result<BTreeMap<(usize, usize), AbelianInvariants>> {
    let d = g.distances();
    let groups: Vec<((usize, usize), AbelianInvariants)> = live_components(&d, l)
        .into_par_iter()
        .map(|c| Ok((c, ComplexSlice::build(&d, l, n, Some(c)).homology(n, ring)?)))
        .collect::<Result<_>>()?;
    Ok(groups.into_iter().filter(|(_, h)| !h.is_zero()).collect())
}

/// Integral off-diagonal groups `MH_{n,l}` with `n < l <= l_max`. An empty
/// result certifies diagonality only up to `l_max`.
pub fn diagonality_report(g: &Digraph, l_max: usize) -> Result<Vec<(usize, usize, AbelianInvariants)>> {
    let table = mh_table(g, l_max, l_max, Ring::Z)?;
    Ok(table
        .nonzero()
        .filter(|((n, l), _)| n != l)
        .map(|(&(n, l), h)| (n, l, h.clone()))
        .collect())
}

/// Power series truncated after `q^order`.
pub type Series = Vec<BigInt>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesReport {
    pub order: usize,
    /// `inverse[x][y]` holds the coefficients of `(Z_G^{-1})_{x,y}`.
    pub inverse: Vec<Vec<Series>>,
    /// Sum of all entries of the inverse: the magnitude.
    pub total: Series,
}

/// Inverts `Z_G = I + Z~` with `Z~_{xy} = q^{d(x,y)}` (`x != y`) as the
/// alternating sum of powers of `Z~`, truncated at `q^order`.
pub fn magnitude_series(g: &Digraph, order: usize) -> SeriesReport {
    let d = g.distances();
    let n = g.vertex_count();
    let zero_series = || vec![BigInt::zero(); order + 1];
    let mut ztilde = vec![vec![zero_series(); n]; n];
    for (x, row) in ztilde.iter_mut().enumerate() {
        for (y, s) in row.iter_mut().enumerate() {
            if x != y {
                if let Some(k) = d.get(x, y).filter(|&k| k <= order) {
                    s[k] = BigInt::one();
                }
            }
        }
    }
    let mut inverse = vec![vec![zero_series(); n]; n];
    for (x, row) in inverse.iter_mut().enumerate() {
        row[x][0] = BigInt::one();
    }
    // power = (-Z~)^k; its lowest possible degree is k
    let mut power = inverse.clone();
    for _ in 1..=order {
        let mut next = vec![vec![zero_series(); n]; n];
        for x in 0..n {
            for m in 0..n {
                if power[x][m].iter().all(Zero::is_zero) {
                    continue;
                }
                for y in 0..n {
                    let b = &ztilde[m][y];
                    for (i, a) in power[x][m].iter().enumerate() {
                        if a.is_zero() {
                            continue;
                        }
                        for j in 1..=order - i {
                            if !b[j].is_zero() {
                                next[x][y][i + j] -= a * &b[j];
                            }
                        }
                    }
                }
            }
        }
        power = next;
        for x in 0..n {
            for y in 0..n {
                for k in 0..=order {
                    let c = power[x][y][k].clone();
                    inverse[x][y][k] += c;
                }
            }
        }
    }
    let mut total = zero_series();
    for row in &inverse {
        for s in row {
            for (t, c) in total.iter_mut().zip(s) {
                *t += c;
            }
        }
    }
    SeriesReport { order, inverse, total }
}

/// `sum_n (-1)^n rank MC_{n,l}` for one component.
pub fn euler_characteristic(d: &DistanceMatrix, l: usize, component: (usize, usize)) -> BigInt {
    (0..=l)
        .map(|n| {
            let r = BigInt::from(mc_basis(d, n, l, Some(component)).len());
            if n % 2 == 0 {
                r
            } else {
                -r
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Digraph {
        Digraph::symmetrize(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn bases() {
        let c4 = cycle(4);
        let d = c4.distances();
        assert_eq!(mc_basis(&d, 2, 2, None).len(), 16);
        assert_eq!(mc_basis(&d, 0, 0, None).len(), 4);
        assert!(mc_basis(&d, 3, 2, None).is_empty());
        // brute force over all tuples
        for n in 0..=3 {
            for l in 0..=4 {
                let mut count = 0;
                let total = 4usize.pow(n as u32 + 1);
                for code in 0..total {
                    let t: Vec<usize> = (0..=n).map(|i| code / 4usize.pow(i as u32) % 4).collect();
                    if t.windows(2).all(|w| w[0] != w[1]) && d.norm(&t) == Some(l) {
                        count += 1;
                    }
                }
                assert_eq!(mc_basis(&d, n, l, None).len(), count, "n={} l={}", n, l);
            }
        }
    }

    #[test]
    fn differential_squares_to_zero() {
        for g in [cycle(4), cycle(5), Digraph::new(4, [(0, 1), (1, 2), (2, 3), (0, 2), (3, 0)]).unwrap()] {
            let d = g.distances();
            for l in 0..=5 {
                let s = ComplexSlice::build(&d, l, 5, None);
                for n in 2..s.differentials.len() {
                    assert!(s.differentials[n - 1].mul(&s.differentials[n]).unwrap().is_zero());
                }
                assert!(s.differentials.get(1).is_none_or(|m| m.is_zero()));
            }
        }
    }

    #[test]
    fn small_homology() {
        let c4 = cycle(4);
        assert_eq!(mh(&c4, 0, 0, Ring::Z, None).unwrap(), AbelianInvariants::free(4));
        assert_eq!(mh(&c4, 1, 1, Ring::Z, None).unwrap(), AbelianInvariants::free(8));
        assert_eq!(mh(&c4, 2, 2, Ring::Z, None).unwrap(), AbelianInvariants::free(12));
        assert!(diagonality_report(&c4, 4).unwrap().is_empty());
        let single = Digraph::new(1, []).unwrap();
        let t = mh_table(&single, 3, 3, Ring::Z).unwrap();
        assert_eq!(t.nonzero().count(), 1);
        assert_eq!(t.get(0, 0), AbelianInvariants::free(1));
    }

    #[test]
    fn series_of_two_point_graph() {
        let k2 = Digraph::symmetrize(2, [(0, 1)]).unwrap();
        let s = magnitude_series(&k2, 3);
        let expected: Series = [2, -2, 2, -2].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(s.total, expected);
        assert_eq!(magnitude_series(&Digraph::new(1, []).unwrap(), 3).total[0], BigInt::one());
    }

    #[test]
    fn series_matches_euler_characteristics() {
        let g = Digraph::new(4, [(0, 1), (1, 2), (2, 3), (0, 2), (3, 0), (1, 0)]).unwrap();
        let d = g.distances();
        let s = magnitude_series(&g, 5);
        for x in 0..4 {
            for y in 0..4 {
                for l in 0..=5 {
                    assert_eq!(s.inverse[x][y][l], euler_characteristic(&d, l, (x, y)));
                }
            }
        }
    }
}
