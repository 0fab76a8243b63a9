//! Exact Weil-polynomial certification, base extension and Bézout primes.

use monodromy::poly::IntPolynomial;
use monodromy::weil::{bezout_bad_primes, certify_weil, finite_extension_transform};
use num_bigint::BigInt;

fn main() -> monodromy::Result<()> {
    let q = BigInt::from(2);
    for s in ["T^2 - T + 2", "T^2 + 2*T + 2", "T^2 - 3*T + 2", "T^4 + 4"] {
        let p: IntPolynomial = s.parse()?;
        println!("{}", certify_weil(&p, &q, 1)?);
    }

    let p: IntPolynomial = "T^2 - T + 2".parse()?;
    // Roots β with β³ = α³: still of absolute value √2.
    let p3 = finite_extension_transform(&p, 1, 3)?;
    println!("{}", certify_weil(&p3, &q, 1)?);
    // A Weil 4-polynomial over F_4 becomes a Weil 2-polynomial of twice the degree.
    let p4: IntPolynomial = "T^2 - 3*T + 4".parse()?;
    println!("{}", certify_weil(&finite_extension_transform(&p4, 2, 1)?, &q, 1)?);

    let a: IntPolynomial = "T^2 - T + 2".parse()?;
    let b: IntPolynomial = "T^2 - 4".parse()?;
    let bz = bezout_bad_primes(&a, &b)?;
    println!("Bézout primes of ({a}, {b}): {:?}", bz.primes);
    Ok(())
}
