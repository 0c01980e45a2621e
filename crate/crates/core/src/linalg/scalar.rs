//! Integer scalars for the elimination kernels.
//!
//! Kernels are written once against [`Scalar`]; every arithmetic step is
//! checked and reports overflow as `None`. `i128` is tried first, and on
//! overflow the caller reruns the same kernel on `BigInt`, which never fails.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub(crate) trait Scalar: Clone + std::fmt::Debug {
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn cmp_abs(&self, other: &Self) -> Ordering;
    fn sub(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Truncating quotient.
    fn div_trunc(&self, other: &Self) -> Self;
    /// Floor quotient, used to bring entries into `[0, pivot)`.
    fn div_floor(&self, other: &Self) -> Self;
    fn from_big(x: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i128 {
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_trunc(&self, other: &Self) -> Self {
        // i128::MIN / -1 cannot reach here: entries never equal i128::MIN
        // because every producing operation is checked and `from_big` rejects it.
        self / other
    }
    fn div_floor(&self, other: &Self) -> Self {
        Integer::div_floor(self, other)
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i128().filter(|v| *v != i128::MIN)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_trunc(&self, other: &Self) -> Self {
        self / other
    }
    fn div_floor(&self, other: &Self) -> Self {
        Integer::div_floor(self, other)
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

pub(crate) type Rows<S> = Vec<Vec<S>>;

/// Converts big-integer rows into the scalar type, or `None` if some entry
/// does not fit.
pub(crate) fn convert_rows<S: Scalar>(rows: &[Vec<BigInt>]) -> Option<Rows<S>> {
    rows.iter()
        .map(|r| r.iter().map(S::from_big).collect::<Option<Vec<S>>>())
        .collect()
}

pub(crate) fn to_big_rows<S: Scalar>(rows: &[Vec<S>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(S::to_big).collect()).collect()
}

/// `rows[target] -= q * rows[src]`, touching columns from `from` onwards.
pub(crate) fn row_sub_multiple<S: Scalar>(
    rows: &mut [Vec<S>],
    target: usize,
    src: usize,
    q: &S,
    from: usize,
) -> Option<()> {
    debug_assert_ne!(target, src);
    let (t, s) = if target < src {
        let (lo, hi) = rows.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for c in from..t.len() {
        if s[c].is_nil() {
            continue;
        }
        let prod = q.mul(&s[c])?;
        t[c] = t[c].sub(&prod)?;
    }
    Some(())
}

/// Same as [`row_sub_multiple`] on columns instead of rows.
pub(crate) fn col_sub_multiple<S: Scalar>(
    rows: &mut [Vec<S>],
    target: usize,
    src: usize,
    q: &S,
    from: usize,
) -> Option<()> {
    for row in rows.iter_mut().skip(from) {
        if row[src].is_nil() {
            continue;
        }
        let prod = q.mul(&row[src])?;
        row[target] = row[target].sub(&prod)?;
    }
    Some(())
}

pub(crate) fn negate_row<S: Scalar>(row: &mut [S]) -> Option<()> {
    for x in row.iter_mut() {
        if !x.is_nil() {
            *x = x.neg()?;
        }
    }
    Some(())
}
