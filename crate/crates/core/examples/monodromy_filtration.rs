//! The monodromy filtration of an integral nilpotent operator and the primes
//! where its graded pieces stop being torsion-free.

use monodromy::filtration::{analyze, graded_map_matrix, NilpotentOperator};

fn main() -> monodromy::Result<()> {
    // Two Jordan blocks glued by a factor 6.
    let n = NilpotentOperator::from_i64(&[&[0, 6, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]])?;
    let rep = analyze(&n)?;
    let (lo, hi) = rep.filtration.window();
    for i in lo..=hi {
        println!("M_{i:>2}: rank {}", rep.filtration.step(i).rank());
    }
    for (i, d) in &rep.graded {
        println!("N^{i}: Gr_{i} -> Gr_-{i}  divisors {d}  matrix {:?}", graded_map_matrix(&n, &rep.filtration, *i).to_rows());
    }
    for (p, why) in &rep.bad_primes.primes {
        let reasons: Vec<String> = why.iter().map(|s| s.to_string()).collect();
        println!("bad prime {p}: {}", reasons.join("; "));
    }
    Ok(())
}
