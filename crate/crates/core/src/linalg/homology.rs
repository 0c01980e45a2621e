use num_bigint::BigInt;
use num_traits::Zero;

use super::field::int_matrix_rank_over;
use super::normal_form::{rank_rows, snf_rows};
use super::{AbelianInvariants, FieldId, IntMatrix, Ring};
use crate::error::{Error, Result};

/// Homology `ker(d_out) / im(d_in)` at the middle term of `C' -> C -> C''`.
///
/// Matrices follow the column convention: `d_in` is `dim C x dim C'` and
/// `d_out` is `dim C'' x dim C`. Over a field the dimension is returned as
/// `free_rank`.
///
/// Over the integers the kernel of `d_out` is a saturated sublattice, so the
/// torsion of the quotient equals the torsion of `coker(d_in)`, which is read
/// off the Smith form of `d_in`.
pub fn homology_at(d_in: &IntMatrix, d_out: &IntMatrix, ring: Ring) -> Result<AbelianInvariants> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::DimensionMismatch(format!(
            "incoming map lands in rank {}, outgoing map starts at rank {}",
            d_in.rows(),
            d_out.cols()
        )));
    }
    let dim = d_in.rows();
    check_composition(d_in, d_out, ring)?;
    match ring {
        Ring::Integers => {
            let rank_out = rank_rows(d_out.row_vecs(), d_out.cols());
            let diag = snf_rows(d_in.row_vecs(), d_in.cols());
            let one = BigInt::from(1);
            let torsion = diag.iter().filter(|d| **d != one).cloned().collect();
            Ok(AbelianInvariants { free_rank: dim - rank_out - diag.len(), torsion })
        }
        Ring::Field(k) => {
            let r_out = int_matrix_rank_over(d_out, k);
            let r_in = int_matrix_rank_over(d_in, k);
            Ok(AbelianInvariants::free(dim - r_out - r_in))
        }
    }
}

fn check_composition(d_in: &IntMatrix, d_out: &IntMatrix, ring: Ring) -> Result<()> {
    if d_in.cols() == 0 || d_out.rows() == 0 || d_in.is_zero() || d_out.is_zero() {
        return Ok(());
    }
    let prod = d_out.mul(d_in)?;
    let ok = match ring {
        Ring::Integers | Ring::Field(FieldId::Rationals) => prod.is_zero(),
        Ring::Field(FieldId::PrimeField(p)) => {
            let p = BigInt::from(p);
            prod.data().iter().all(|x| (x % &p).is_zero())
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::NonZeroComposition)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_complexes() {
        let h = homology_at(&IntMatrix::zeros(3, 0), &IntMatrix::zeros(0, 3), Ring::Z).unwrap();
        assert_eq!(h, AbelianInvariants::free(3));

        let two = IntMatrix::from_i64(&[&[2]]);
        let out = IntMatrix::zeros(0, 1);
        let z = homology_at(&two, &out, Ring::Z).unwrap();
        assert_eq!(z, AbelianInvariants { free_rank: 0, torsion: vec![BigInt::from(2)] });
        assert_eq!(homology_at(&two, &out, Ring::fp(2).unwrap()).unwrap(), AbelianInvariants::free(1));
        assert_eq!(homology_at(&two, &out, Ring::Q).unwrap(), AbelianInvariants::zero());
    }

    #[test]
    fn rejects_bad_pairs() {
        let a = IntMatrix::from_i64(&[&[1]]);
        assert_eq!(homology_at(&a, &a, Ring::Z), Err(Error::NonZeroComposition));
        assert!(homology_at(&IntMatrix::zeros(2, 1), &IntMatrix::zeros(1, 3), Ring::Z).is_err());
        // 2 * 1 vanishes mod 2 but not over the integers
        let d_in = IntMatrix::from_i64(&[&[1]]);
        let d_out = IntMatrix::from_i64(&[&[2]]);
        assert!(homology_at(&d_in, &d_out, Ring::fp(2).unwrap()).is_ok());
        assert!(homology_at(&d_in, &d_out, Ring::Z).is_err());
    }

    #[test]
    fn circle_boundary() {
        // simplicial triangle: vertices 0,1,2; edges 01, 02, 12
        let d1 = IntMatrix::from_i64(&[&[-1, -1, 0], &[1, 0, -1], &[0, 1, 1]]);
        let h1 = homology_at(&IntMatrix::zeros(3, 0), &d1, Ring::Z).unwrap();
        assert_eq!(h1, AbelianInvariants::free(1));
        let h0 = homology_at(&d1, &IntMatrix::zeros(0, 3), Ring::Z).unwrap();
        assert_eq!(h0, AbelianInvariants::free(1));
    }
}
