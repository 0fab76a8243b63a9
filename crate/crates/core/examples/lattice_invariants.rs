//! Smith form, kernels, saturation and cokernels of integer matrices.

use monodromy::exact_linalg::{cokernel_invariants, image, kernel, smith_normal_form, IntMatrix, LatticeMap};

fn main() -> monodromy::Result<()> {
    let a = LatticeMap::from_matrix(IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
    let snf = smith_normal_form(&a);
    println!("elementary divisors: {}", snf.divisors());
    // U·A·V = D
    let check = snf.u.mul(a.matrix())?.mul(&snf.v)?;
    assert_eq!(check, snf.d);

    let b = LatticeMap::from_matrix(IntMatrix::from_i64(&[&[2, 0], &[0, 0]]));
    println!("coker of diag(2, 0): {}", cokernel_invariants(&b));
    println!("kernel basis: {:?}", kernel(&b).basis().to_rows());

    let img = image(&b);
    println!("image saturated? {}  saturation rank {}", img.is_saturated(), img.saturate().rank());
    Ok(())
}
