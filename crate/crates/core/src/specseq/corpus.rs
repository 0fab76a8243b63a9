//! Bundled degeneration descriptors.

use crate::exact_linalg::IntMatrix;
use crate::{Error, Result};

use super::descriptor::DegenerationDescriptor;

/// Kodaira type I_n: a cycle of n projective lines, n ≥ 3.
pub fn i_n(n: usize) -> Result<DegenerationDescriptor> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("I_n needs n ≥ 3, got {n}")));
    }
    let mut desc = DegenerationDescriptor::new(1, n);
    for k in 1..=n {
        desc.add_stratum(&[k], &[(0, 1), (2, 1)]);
    }
    let one = || IntMatrix::from_i64(&[&[1]]);
    let edges: Vec<[usize; 2]> = (1..n).map(|k| [k, k + 1]).chain([[1, n]]).collect();
    for e in &edges {
        desc.add_stratum(e, &[(0, 1)]);
    }
    for e in &edges {
        for &k in e {
            desc.add_restriction(&[k], e, 0, one());
            desc.add_gysin(e, &[k], 0, one());
        }
    }
    Ok(desc)
}

/// A single smooth elliptic curve over F_2 with Frobenius polynomial
/// T² − T + 2.
pub fn good_reduction() -> DegenerationDescriptor {
    let mut desc = DegenerationDescriptor::new(1, 1);
    desc.add_stratum(&[1], &[(0, 1), (1, 2), (2, 1)]);
    desc.set_frobenius(&[1], 0, IntMatrix::from_i64(&[&[1]])).expect("declared");
    desc.set_frobenius(&[1], 1, IntMatrix::from_i64(&[&[0, -2], &[1, 1]])).expect("declared");
    desc.set_frobenius(&[1], 2, IntMatrix::from_i64(&[&[2]])).expect("declared");
    desc.with_q(2)
}

/// Two surfaces D_1, D_2 meeting along a genus-g curve C.
///
/// H^2(D_i) has basis (a_i, b_i). The Gysin map sends 1 ∈ H^0(C) to a_i and
/// restriction sends a_1 ↦ s, a_2 ↦ −s, b_i ↦ 0 in H^2(C) = Z, so the
/// Gysin∘restriction composite is multiplication by s.
pub fn two_components(g: usize, s: i64) -> DegenerationDescriptor {
    let mut desc = DegenerationDescriptor::new(2, 2);
    for k in [1, 2] {
        desc.add_stratum(&[k], &[(0, 1), (2, 2), (4, 1)]);
    }
    desc.add_stratum(&[1, 2], &[(0, 1), (1, 2 * g), (2, 1)]);
    for (k, sk) in [(1usize, s), (2usize, -s)] {
        desc.add_restriction(&[k], &[1, 2], 0, IntMatrix::from_i64(&[&[1]]));
        desc.add_restriction(&[k], &[1, 2], 2, IntMatrix::from_i64(&[&[sk, 0]]));
        desc.add_gysin(&[1, 2], &[k], 0, IntMatrix::from_i64(&[&[1], &[0]]));
        desc.add_gysin(&[1, 2], &[k], 2, IntMatrix::from_i64(&[&[1]]));
    }
    desc
}
