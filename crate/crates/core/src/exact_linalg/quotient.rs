use num_bigint::BigInt;

use super::hermite::{echelon_coordinates, row_hnf};
use super::smith::solve_integral;
use super::{IntMatrix, Sublattice};

/// The torsion-free quotient upper / sat(lower), with a deterministic basis.
///
/// Classes are identified with their images under the functionals that
/// vanish on `lower`; the basis is the Hermite basis of that image, and each
/// basis vector comes with a lift in `upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeQuotient {
    proj: IntMatrix,
    image_basis: IntMatrix,
    lifts: Vec<Vec<BigInt>>,
}

impl FreeQuotient {
    pub fn new(upper: &Sublattice, lower: &Sublattice) -> Self {
        let proj = lower.annihilator().basis().clone();
        let bt = upper.basis().transpose();
        let pb = proj.dot(&bt);
        let image_basis = row_hnf(&pb.transpose());
        let lifts = image_basis
            .rows_iter()
            .map(|b| bt.apply(&solve_integral(&pb, b).expect("image vectors have preimages")))
            .collect();
        FreeQuotient { proj, image_basis, lifts }
    }

    pub fn rank(&self) -> usize {
        self.image_basis.nrows()
    }

    /// Vectors of `upper` mapping to the basis of the quotient.
    pub fn lifts(&self) -> &[Vec<BigInt>] {
        &self.lifts
    }

    /// Coordinates of the class of v, for v in `upper`.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        echelon_coordinates(&self.image_basis, &self.proj.apply(v))
    }

    /// Matrix of the map induced by `m` from `self` to `target`, when m
    /// sends upper into target's upper and lower into target's saturated
    /// lower.
    pub fn induced_matrix(&self, m: &IntMatrix, target: &FreeQuotient) -> IntMatrix {
        let mut out = IntMatrix::zeros(target.rank(), self.rank());
        for (c, x) in self.lifts.iter().enumerate() {
            let y = m.apply(x);
            let coords = target.coordinates(&y).expect("image lies in the target subquotient");
            for (r, v) in coords.into_iter().enumerate() {
                out[(r, c)] = v;
            }
        }
        out
    }
}
