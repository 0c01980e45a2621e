use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::{
    col_sub_multiple, convert_rows, negate_row, row_sub_multiple, to_big_rows, Rows, Scalar,
};
use super::IntMatrix;

/// Smith invariant factors `d_1 | d_2 | ... | d_r`, all positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub diagonal: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// Row Hermite normal form with zero rows removed: pivots positive and
/// strictly increasing in column, entries above a pivot reduced into
/// `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let rows = hnf_rows(m.row_vecs(), m.cols());
    IntMatrix::from_rows(m.cols(), &rows).expect("hnf preserves width")
}

pub fn snf(m: &IntMatrix) -> SnfResult {
    SnfResult { diagonal: snf_rows(m.row_vecs(), m.cols()) }
}

pub(crate) fn hnf_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigInt>> {
    if let Some(small) = convert_rows::<i128>(&rows) {
        if let Some(out) = hnf_kernel(small, cols) {
            return to_big_rows(&out);
        }
    }
    hnf_kernel(rows, cols).expect("big-integer arithmetic does not overflow")
}

pub(crate) fn snf_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Vec<BigInt> {
    let diag = match convert_rows::<i128>(&rows).and_then(|small| snf_kernel(small, cols)) {
        Some(d) => d.iter().map(Scalar::to_big).collect(),
        None => snf_kernel(rows, cols)
            .expect("big-integer arithmetic does not overflow")
            .into_iter()
            .collect(),
    };
    normalize_diagonal(diag)
}

/// Rank over the rationals (equivalently over the integers).
pub(crate) fn rank_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> usize {
    hnf_rows(rows, cols).len()
}

fn hnf_kernel<S: Scalar>(mut m: Rows<S>, cols: usize) -> Option<Rows<S>> {
    let nrows = m.len();
    let mut pr = 0;
    for c in 0..cols {
        if pr == nrows {
            break;
        }
        loop {
            let Some(best) = min_abs_in_column(&m, c, pr) else { break };
            m.swap(pr, best);
            let mut cleared = true;
            for r in pr + 1..nrows {
                if m[r][c].is_nil() {
                    continue;
                }
                let q = m[r][c].div_trunc(&m[pr][c]);
                row_sub_multiple(&mut m, r, pr, &q, c)?;
                if !m[r][c].is_nil() {
                    cleared = false;
                }
            }
            if cleared {
                break;
            }
        }
        if m[pr][c].is_nil() {
            continue;
        }
        if m[pr][c].is_neg() {
            negate_row(&mut m[pr])?;
        }
        for r in 0..pr {
            if m[r][c].is_nil() {
                continue;
            }
            let q = m[r][c].div_floor(&m[pr][c]);
            if !q.is_nil() {
                row_sub_multiple(&mut m, r, pr, &q, c)?;
            }
        }
        pr += 1;
    }
    m.truncate(pr);
    Some(m)
}

fn min_abs_in_column<S: Scalar>(m: &Rows<S>, c: usize, from: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (r, row) in m.iter().enumerate().skip(from) {
        let x = &row[c];
        if x.is_nil() {
            continue;
        }
        if best.is_none_or(|b| x.cmp_abs(&m[b][c]) == Ordering::Less) {
            best = Some(r);
        }
    }
    best
}

fn is_unit<S: Scalar>(x: &S) -> bool {
    let one = S::from_big(&BigInt::one()).expect("one fits");
    x.cmp_abs(&one) == Ordering::Equal
}

/// Picks a nonzero entry of the trailing submatrix, preferring units and
/// otherwise the smallest absolute value.
fn pick_pivot<S: Scalar>(m: &Rows<S>, t: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (r, row) in m.iter().enumerate().skip(t) {
        for (c, x) in row.iter().enumerate().take(cols).skip(t) {
            if x.is_nil() {
                continue;
            }
            if is_unit(x) {
                return Some((r, c));
            }
            if best.is_none_or(|(br, bc)| x.cmp_abs(&m[br][bc]) == Ordering::Less) {
                best = Some((r, c));
            }
        }
    }
    best
}

fn swap_cols<S: Scalar>(m: &mut Rows<S>, a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

fn snf_kernel<S: Scalar>(mut m: Rows<S>, cols: usize) -> Option<Vec<S>> {
    let nrows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows && t < cols {
        let Some((r, c)) = pick_pivot(&m, t, cols) else { break };
        m.swap(t, r);
        swap_cols(&mut m, t, c);
        loop {
            let mut clean = true;
            for r in t + 1..nrows {
                if m[r][t].is_nil() {
                    continue;
                }
                let q = m[r][t].div_trunc(&m[t][t]);
                row_sub_multiple(&mut m, r, t, &q, t)?;
                if !m[r][t].is_nil() {
                    clean = false;
                }
            }
            for c in t + 1..cols {
                if m[t][c].is_nil() {
                    continue;
                }
                let q = m[t][c].div_trunc(&m[t][t]);
                col_sub_multiple(&mut m, c, t, &q, t)?;
                if !m[t][c].is_nil() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
            // A remainder smaller than the pivot survived; move it to the pivot.
            let mut best = (t, t);
            for r in t + 1..nrows {
                if !m[r][t].is_nil() && m[r][t].cmp_abs(&m[best.0][best.1]) == Ordering::Less {
                    best = (r, t);
                }
            }
            for c in t + 1..cols {
                if !m[t][c].is_nil() && m[t][c].cmp_abs(&m[best.0][best.1]) == Ordering::Less {
                    best = (t, c);
                }
            }
            m.swap(t, best.0);
            swap_cols(&mut m, t, best.1);
        }
        diag.push(m[t][t].clone());
        t += 1;
    }
    Some(diag)
}

/// Turns any nonzero diagonal into invariant-factor form.
fn normalize_diagonal(diag: Vec<BigInt>) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = diag.into_iter().map(|x| x.abs()).filter(|x| !x.is_zero()).collect();
    if d.iter().all(One::is_one) {
        return d;
    }
    let k = d.len();
    for i in 0..k {
        for j in i + 1..k {
            if Zero::is_zero(&(&d[j] % &d[i])) {
                continue;
            }
            let g = Integer::gcd(&d[i], &d[j]);
            let l = &d[i] / &g * &d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d
}
