use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::normal_form::{hnf_rows, snf_rows};
use super::{AbelianInvariants, IntMatrix};
use crate::error::{Error, Result};

/// A sublattice of `Z^n`, stored by its row Hermite normal form so that two
/// lattices are equal exactly when their bases are.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntLattice {
    ambient_rank: usize,
    basis: Vec<Vec<BigInt>>,
}

impl IntLattice {
    pub fn new(ambient_rank: usize, generators: Vec<Vec<BigInt>>) -> Result<Self> {
        if let Some(bad) = generators.iter().find(|g| g.len() != ambient_rank) {
            return Err(Error::DimensionMismatch(format!(
                "generator of length {} in Z^{}",
                bad.len(),
                ambient_rank
            )));
        }
        let mut gens: Vec<Vec<BigInt>> =
            generators.into_iter().filter(|g| g.iter().any(|x| !x.is_zero())).collect();
        gens.sort();
        gens.dedup();
        Ok(IntLattice { ambient_rank, basis: hnf_rows(gens, ambient_rank) })
    }

    pub fn from_matrix(m: &IntMatrix) -> Self {
        IntLattice::new(m.cols(), m.row_vecs()).expect("rows have matrix width")
    }

    pub fn zero(ambient_rank: usize) -> Self {
        IntLattice { ambient_rank, basis: Vec::new() }
    }

    pub fn full(ambient_rank: usize) -> Self {
        let basis = (0..ambient_rank)
            .map(|i| {
                let mut v = vec![BigInt::zero(); ambient_rank];
                v[i] = BigInt::from(1);
                v
            })
            .collect();
        IntLattice { ambient_rank, basis }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis_rows(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn basis(&self) -> IntMatrix {
        IntMatrix::from_rows(self.ambient_rank, &self.basis).expect("basis rows have ambient width")
    }

    /// Coordinates of `v` in the stored basis, or `None` if `v` is not in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.ambient_rank {
            return None;
        }
        let mut residual = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let p = row.iter().position(|x| !x.is_zero()).expect("basis rows are nonzero");
            if residual[..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, r) = residual[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (x, b) in residual.iter_mut().zip(row).skip(p) {
                    *x -= &q * b;
                }
            }
            coords.push(q);
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_sublattice_of(&self, other: &IntLattice) -> bool {
        self.ambient_rank == other.ambient_rank && self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &IntLattice) -> Result<IntLattice> {
        self.check_ambient(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Ok(IntLattice { ambient_rank: self.ambient_rank, basis: hnf_rows(gens, self.ambient_rank) })
    }

    /// Intersection by the Zassenhaus trick: the normal form of the rows
    /// `[a | a]` and `[b | 0]` has the intersection in the right half of the
    /// rows whose left half vanishes.
    pub fn intersection(&self, other: &IntLattice) -> Result<IntLattice> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(IntLattice::zero(self.ambient_rank));
        }
        if self.is_sublattice_of(other) {
            return Ok(self.clone());
        }
        if other.is_sublattice_of(self) {
            return Ok(other.clone());
        }
        let n = self.ambient_rank;
        let mut rows = Vec::with_capacity(self.rank() + other.rank());
        for a in &self.basis {
            let mut r = a.clone();
            r.extend(a.iter().cloned());
            rows.push(r);
        }
        for b in &other.basis {
            let mut r = b.clone();
            r.extend(std::iter::repeat_n(BigInt::zero(), n));
            rows.push(r);
        }
        let h = hnf_rows(rows, 2 * n);
        let gens: Vec<Vec<BigInt>> = h
            .into_iter()
            .filter(|r| r[..n].iter().all(Zero::is_zero))
            .map(|r| r[n..].to_vec())
            .collect();
        Ok(IntLattice { ambient_rank: n, basis: hnf_rows(gens, n) })
    }

    fn check_ambient(&self, other: &IntLattice) -> Result<()> {
        if self.ambient_rank == other.ambient_rank {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "lattices in Z^{} and Z^{}",
                self.ambient_rank, other.ambient_rank
            )))
        }
    }
}

/// Invariants of `sup / sub`. Fails unless `sub` is contained in `sup`.
pub fn quotient_invariants(sub: &IntLattice, sup: &IntLattice) -> Result<AbelianInvariants> {
    if sub.ambient_rank != sup.ambient_rank {
        return Err(Error::DimensionMismatch(format!(
            "quotient of Z^{} by a lattice in Z^{}",
            sup.ambient_rank, sub.ambient_rank
        )));
    }
    let mut coords = Vec::with_capacity(sub.rank());
    for b in &sub.basis {
        coords.push(sup.coordinates(b).ok_or(Error::NotContained)?);
    }
    let diag = snf_rows(coords, sup.rank());
    let torsion = diag.iter().filter(|d| **d > BigInt::from(1)).cloned().collect();
    Ok(AbelianInvariants { free_rank: sup.rank() - diag.len(), torsion })
}
