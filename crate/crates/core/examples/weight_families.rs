//! Families of mod-ℓ modules given by an integral model: weights,
//! almost-all-ℓ isomorphisms and forced vanishing between weights.

use monodromy::exact_linalg::IntMatrix;
use monodromy::families::{almost_all_iso, vanishing_for_almost_all, weight_certify_family, zero_map, FamilyMap, IntegralFamily};
use num_bigint::BigInt;

fn main() -> monodromy::Result<()> {
    let q = BigInt::from(2);
    // H^1 of an elliptic curve over F_2 with trace 1, and a Tate twist Z(-1).
    let h1 = IntegralFamily::from_frobenius(IntMatrix::from_i64(&[&[0, -2], &[1, 1]]))?;
    let tate = IntegralFamily::from_frobenius(IntMatrix::from_i64(&[&[2]]))?;

    let c = weight_certify_family(&h1, &q, 1, None)?;
    println!("H^1 has weight 1, killed by {}", c.polynomial());

    let iso = FamilyMap::new(h1.clone(), h1.clone(), IntMatrix::from_i64(&[&[1, -2], &[1, 2]]))?;
    println!("iso outside {:?}", almost_all_iso(&iso)?.bad_primes());

    let zero = zero_map(h1, tate)?;
    let rep = vanishing_for_almost_all(&zero, &q, 1, 2)?;
    println!("weight 1 -> weight 2 maps vanish outside {:?}", rep.prime_set());
    Ok(())
}
