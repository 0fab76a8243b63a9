use num_bigint::BigInt;

use super::hermite::{echelon_coordinates, kernel_rows, row_hnf};
use super::modp::{ModMatrix, Subspace};
use super::{IntMatrix, Lattice};
use crate::{Error, Result};

/// A sublattice of Z^n, stored by the Hermite normal form of a basis.
///
/// The basis vectors are the rows of `basis`; `generators()` returns them as
/// columns. Two sublattices are equal exactly when their stored forms are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sublattice {
    ambient: Lattice,
    basis: IntMatrix,
}

impl Sublattice {
    /// The sublattice spanned by the columns of `generators`.
    pub fn new(ambient: Lattice, generators: &IntMatrix) -> Result<Self> {
        if generators.nrows() != ambient.rank {
            return Err(Error::shape(format!(
                "generators have {} rows but the ambient rank is {}",
                generators.nrows(),
                ambient.rank
            )));
        }
        Ok(Sublattice { basis: row_hnf(&generators.transpose()), ambient })
    }

    /// The sublattice spanned by the rows of `rows`.
    pub fn from_rows(ambient: Lattice, rows: &IntMatrix) -> Result<Self> {
        if rows.ncols() != ambient.rank {
            return Err(Error::shape("row vectors do not live in the ambient lattice"));
        }
        Ok(Sublattice { basis: row_hnf(rows), ambient })
    }

    pub fn zero(n: usize) -> Self {
        Sublattice { ambient: Lattice::new(n), basis: IntMatrix::zeros(0, n) }
    }

    pub fn full(n: usize) -> Self {
        Sublattice { ambient: Lattice::new(n), basis: IntMatrix::identity(n) }
    }

    /// {x : m·x = 0} inside Z^{m.ncols()}.
    pub fn kernel_of(m: &IntMatrix) -> Self {
        Sublattice { ambient: Lattice::new(m.ncols()), basis: kernel_rows(m) }
    }

    /// Column span of `m` inside Z^{m.nrows()}.
    pub fn image_of(m: &IntMatrix) -> Self {
        Sublattice { ambient: Lattice::new(m.nrows()), basis: row_hnf(&m.transpose()) }
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient.rank
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    /// Basis vectors as rows, in Hermite normal form.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Basis vectors as the columns of an (ambient rank × rank) matrix.
    pub fn generators(&self) -> IntMatrix {
        self.basis.transpose()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_full(&self) -> bool {
        self.basis == IntMatrix::identity(self.ambient.rank)
    }

    /// Integer functionals vanishing on the sublattice, as a sublattice of
    /// the dual Z^n. Always saturated.
    pub fn annihilator(&self) -> Sublattice {
        Sublattice { ambient: self.ambient.clone(), basis: kernel_rows(&self.basis) }
    }

    /// {x ∈ Z^n : k·x ∈ self for some k ≥ 1}, computed as the double
    /// annihilator.
    pub fn saturate(&self) -> Sublattice {
        let ann = self.annihilator();
        Sublattice { ambient: self.ambient.clone(), basis: kernel_rows(&ann.basis) }
    }

    pub fn is_saturated(&self) -> bool {
        self.saturate() == *self
    }

    pub fn sum(&self, other: &Sublattice) -> Sublattice {
        assert_eq!(self.ambient_rank(), other.ambient_rank());
        let stacked = self.basis.vstack(&other.basis).expect("same ambient");
        Sublattice { ambient: self.ambient.clone(), basis: row_hnf(&stacked) }
    }

    pub fn intersect(&self, other: &Sublattice) -> Sublattice {
        assert_eq!(self.ambient_rank(), other.ambient_rank());
        // x = B1ᵀa = B2ᵀb  ⇔  (a, b) ∈ ker [B1ᵀ | −B2ᵀ]
        let k1 = self.rank();
        let m = self.basis.transpose().hstack(&other.basis.transpose().neg()).expect("same ambient");
        let ker = kernel_rows(&m);
        let coeffs = ker.block(0, 0, ker.nrows(), k1);
        let rows = coeffs.dot(&self.basis);
        Sublattice { ambient: self.ambient.clone(), basis: row_hnf(&rows) }
    }

    pub fn contains_vector(&self, v: &[BigInt]) -> bool {
        v.len() == self.ambient.rank && echelon_coordinates(&self.basis, v).is_some()
    }

    pub fn contains(&self, other: &Sublattice) -> bool {
        other.ambient_rank() == self.ambient_rank() && other.basis.rows_iter().all(|r| self.contains_vector(r))
    }

    /// Coordinates of `v` with respect to the stored basis.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        echelon_coordinates(&self.basis, v)
    }

    /// Image under the linear map with matrix `m` (target × ambient).
    pub fn map(&self, m: &IntMatrix) -> Result<Sublattice> {
        if m.ncols() != self.ambient_rank() {
            return Err(Error::shape("map source does not match the ambient lattice"));
        }
        let rows = self.basis.dot(&m.transpose());
        Ok(Sublattice { ambient: Lattice::new(m.nrows()), basis: row_hnf(&rows) })
    }

    /// {x : m·x ∈ target}.
    pub fn preimage(m: &IntMatrix, target: &Sublattice) -> Result<Sublattice> {
        if m.nrows() != target.ambient_rank() {
            return Err(Error::shape("map target does not match the sublattice"));
        }
        let n = m.ncols();
        let aug = m.hstack(&target.basis.transpose().neg())?;
        let ker = kernel_rows(&aug);
        let xs = ker.block(0, 0, ker.nrows(), n);
        Ok(Sublattice { ambient: Lattice::new(n), basis: row_hnf(&xs) })
    }

    /// Span of the reduced basis in F_p^n. For a saturated sublattice this
    /// is M ⊗ F_p and has the same dimension as the rank.
    pub fn reduce_mod(&self, p: u64) -> Subspace {
        Subspace::span(&ModMatrix::reduce(&self.basis, p))
    }
}
