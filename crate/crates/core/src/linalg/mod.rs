//! Exact integer and finite-field linear algebra.
//!
//! Everything here works over arbitrary-precision integers. The elimination
//! kernels first run on `i128` with checked arithmetic and transparently
//! restart on [`BigInt`] when an intermediate value overflows, so results do
//! not depend on which path was taken.

mod field;
mod homology;
mod lattice;
mod normal_form;
mod scalar;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use field::{
    int_matrix_rank_over, int_rows_to_field, nullspace, rank, reduce_against, rref, Field,
    PrimeField, Rationals, Rref,
};
pub use homology::homology_at;
pub use lattice::{quotient_invariants, IntLattice};
pub use normal_form::{hnf, snf, SnfResult};

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from rows; an empty row list yields a `0 x cols` matrix.
    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {} columns",
                    r.len(),
                    cols
                )));
            }
            data.extend(r.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    /// Convenience constructor for literal matrices; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let owned: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        IntMatrix::from_rows(cols, &owned).expect("ragged matrix literal")
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone().into());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "stacking {} columns on {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub(crate) fn data(&self) -> &[BigInt] {
        &self.data
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}", self.rows, self.cols)?;
        f.debug_list().entries((0..self.rows).map(|r| {
            self.row(r).iter().map(|x| x.to_string()).collect::<Vec<_>>()
        }))
        .finish()
    }
}

/// A finitely generated abelian group `Z^free ⊕ ⊕ Z/t_i`, with the torsion
/// coefficients in divisibility order. Field-valued homology is stored with
/// the dimension in `free_rank` and no torsion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn zero() -> Self {
        AbelianInvariants::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianInvariants { free_rank: rank, torsion: Vec::new() }
    }

    /// Normalizes arbitrary torsion orders (each > 1) into invariant-factor form.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        let torsion = if torsion.len() <= 1 {
            torsion.into_iter().filter(|t| *t > BigInt::one()).collect()
        } else {
            snf(&IntMatrix::diagonal(&torsion))
                .diagonal
                .into_iter()
                .filter(|t| *t > BigInt::one())
                .collect()
        };
        AbelianInvariants { free_rank, torsion }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &AbelianInvariants) -> AbelianInvariants {
        let mut torsion = self.torsion.clone();
        torsion.extend(other.torsion.iter().cloned());
        AbelianInvariants::new(self.free_rank + other.free_rank, torsion)
    }

    /// Number of torsion coefficients divisible by `p`.
    pub fn torsion_divisible_by(&self, p: u64) -> usize {
        let p = BigInt::from(p);
        self.torsion.iter().filter(|t| (*t % &p).is_zero()).count()
    }
}

impl std::iter::Sum for AbelianInvariants {
    fn sum<I: Iterator<Item = AbelianInvariants>>(iter: I) -> Self {
        let mut free = 0;
        let mut torsion = Vec::new();
        for a in iter {
            free += a.free_rank;
            torsion.extend(a.torsion);
        }
        AbelianInvariants::new(free, torsion)
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{}", t));
        }
        write!(f, "{}", parts.join("+"))
    }
}

/// Ground field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldId {
    Rationals,
    PrimeField(u64),
}

impl FieldId {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldId::PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// Characteristic; 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldId::Rationals => 0,
            FieldId::PrimeField(p) => *p,
        }
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldId::Rationals => write!(f, "Q"),
            FieldId::PrimeField(p) => write!(f, "Fp:{}", p),
        }
    }
}

/// Coefficient ring for homology computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Integers,
    Field(FieldId),
}

impl Ring {
    pub const Z: Ring = Ring::Integers;
    pub const Q: Ring = Ring::Field(FieldId::Rationals);

    pub fn fp(p: u64) -> Result<Ring> {
        FieldId::prime(p).map(Ring::Field)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Field(k) => k.fmt(f),
        }
    }
}

impl std::str::FromStr for Ring {
    type Err = Error;

    /// Accepts `z`, `q` and `fp:<p>` (case-insensitive).
    fn from_str(s: &str) -> Result<Ring> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "z" => Ok(Ring::Integers),
            "q" => Ok(Ring::Q),
            _ => {
                let p = lower
                    .strip_prefix("fp:")
                    .or_else(|| lower.strip_prefix('f'))
                    .ok_or_else(|| Error::Parse(format!("unknown ring '{}'", s)))?;
                let p: u64 = p.parse().map_err(|_| Error::Parse(format!("bad prime in '{}'", s)))?;
                Ring::fp(p)
            }
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
