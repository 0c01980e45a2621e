use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::normal_form::rank_rows;
use super::{FieldId, IntMatrix};
use crate::error::Result;

/// A ground field with its own element representation.
pub trait Field: Clone + Copy + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn id(&self) -> FieldId;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_big(&self, x: &BigInt) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Exact textual form (`p/q` for rationals).
    fn render(&self, a: &Self::Elem) -> String;

    fn from_i64(&self, x: i64) -> Self::Elem {
        self.from_big(&BigInt::from(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn id(&self) -> FieldId {
        FieldId::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_big(&self, x: &BigInt) -> BigRational {
        BigRational::from_integer(x.clone())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn render(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

/// The prime field `F_p`, elements stored as residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        FieldId::prime(p).map(|_| PrimeField { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn id(&self) -> FieldId {
        FieldId::PrimeField(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_big(&self, x: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = ((x % &p) + &p) % &p;
        r.to_u64().expect("residue fits")
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + (self.p - *b) as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        self.pow(*a, self.p - 2)
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// Reduced row echelon form: pivot entries are one and pivot columns are
/// otherwise zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Rref<E> {
    pub rows: Vec<Vec<E>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl<E: Clone + PartialEq> Rref<E> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

pub fn rref<F: Field>(field: &F, rows: Vec<Vec<F::Elem>>, cols: usize) -> Rref<F::Elem> {
    let mut m = rows;
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr == m.len() {
            break;
        }
        let Some(r) = (pr..m.len()).find(|&r| !field.is_zero(&m[r][c])) else { continue };
        m.swap(pr, r);
        let inv = field.inv(&m[pr][c]);
        for x in m[pr].iter_mut().skip(c) {
            *x = field.mul(x, &inv);
        }
        let pivot_row = m[pr].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == pr || field.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !field.is_zero(p) {
                    *x = field.sub(x, &field.mul(&f, p));
                }
            }
        }
        pivots.push(c);
        pr += 1;
    }
    m.truncate(pr);
    Rref { rows: m, pivots, cols }
}

pub fn rank<F: Field>(field: &F, rows: Vec<Vec<F::Elem>>, cols: usize) -> usize {
    rref(field, rows, cols).rank()
}

/// Basis of `{x : r . x = 0 for every row r}`.
pub fn nullspace<F: Field>(field: &F, rows: Vec<Vec<F::Elem>>, cols: usize) -> Vec<Vec<F::Elem>> {
    let e = rref(field, rows, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for f in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); cols];
        v[f] = field.one();
        for (row, &p) in e.rows.iter().zip(&e.pivots) {
            v[p] = field.neg(&row[f]);
        }
        out.push(v);
    }
    out
}

/// Residue of `v` modulo the row space of `e`; zero iff `v` lies in it.
pub fn reduce_against<F: Field>(field: &F, e: &Rref<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    let mut r = v.to_vec();
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        if field.is_zero(&r[p]) {
            continue;
        }
        let f = r[p].clone();
        for (x, y) in r.iter_mut().zip(row).skip(p) {
            if !field.is_zero(y) {
                *x = field.sub(x, &field.mul(&f, y));
            }
        }
    }
    r
}

pub fn int_rows_to_field<F: Field>(field: &F, m: &IntMatrix) -> Vec<Vec<F::Elem>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(|x| field.from_big(x)).collect()).collect()
}

/// Rank of an integer matrix after base change to `field`.
pub fn int_matrix_rank_over(m: &IntMatrix, field: FieldId) -> usize {
    match field {
        FieldId::Rationals => rank_rows(m.row_vecs(), m.cols()),
        FieldId::PrimeField(p) => {
            let f = PrimeField { p };
            rank(&f, int_rows_to_field(&f, m), m.cols())
        }
    }
}
