//! Truncated log/exp over F_ℓ and the comparison between the reduced
//! integral filtration and the mod-ℓ filtration.

use monodromy::exact_linalg::ModMatrix;
use monodromy::filtration::NilpotentOperator;
use monodromy::modl::{exp_nilpotent, filtration_mod_ell, log_unipotent, property_tf_check, ModlOperator};

fn main() -> monodromy::Result<()> {
    let u = ModlOperator::unipotent(ModMatrix::from_i64(5, &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]))?;
    let n = log_unipotent(&u)?;
    println!("log U over F_5 = {:?}", n.matrix().to_rows());
    assert_eq!(exp_nilpotent(&n)?, u);
    println!("graded dims: {:?}", filtration_mod_ell(&u)?.graded_ranks());

    let op = NilpotentOperator::from_i64(&[&[0, 10], &[0, 0]])?;
    for ell in [2u64, 3, 5, 7] {
        let tf = property_tf_check(&op, ell)?;
        match tf.step_witness.as_ref().or(tf.torsion_witness.as_ref()) {
            None => println!("ℓ = {ell}: property (t-f) holds"),
            Some(w) => println!("ℓ = {ell}: fails, {w}"),
        }
    }
    Ok(())
}
