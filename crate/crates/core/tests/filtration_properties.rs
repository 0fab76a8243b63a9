mod common;

use common::*;
use monodromy::exact_linalg::IntMatrix;
use monodromy::filtration::{
    analyze, bad_primes_of_nilpotent, cokernel_torsion_freeness, graded_map_invariants, monodromy_filtration_rational,
    satisfies_characterization, NilpotentOperator,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn nilpotent(max: usize) -> impl Strategy<Value = NilpotentOperator> {
    (1..=max, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        NilpotentOperator::new(random_nilpotent(&mut rng, n, 20)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn filtration_matches_the_closed_formula(op in nilpotent(6)) {
        let fil = monodromy_filtration_rational(&op);
        let n = op.rank();
        for (i, m) in filtration_oracle(op.matrix()) {
            prop_assert!(same_span(&to_q_rows(fil.step(i).basis()), &m, n), "step {}", i);
        }
        prop_assert!(fil.is_saturated());
        prop_assert!(satisfies_characterization(&op, &fil));
    }

    #[test]
    fn graded_ranks_are_symmetric(op in nilpotent(8)) {
        let ranks = monodromy_filtration_rational(&op).graded_ranks();
        let rev: Vec<usize> = ranks.iter().rev().copied().collect();
        prop_assert_eq!(&ranks, &rev);
        prop_assert_eq!(ranks.iter().sum::<usize>(), op.rank());
    }

    #[test]
    fn cokernel_and_graded_primes_coincide(op in nilpotent(7)) {
        let rep = analyze(&op).unwrap();
        prop_assert_eq!(rep.cokernels_torsion_free(), rep.graded_unimodular());
        let fil = monodromy_filtration_rational(&op);
        for i in 0..=op.nilpotency_index() {
            prop_assert_eq!(graded_map_invariants(&op, &fil, i).rank_defect(), 0);
        }
    }

    #[test]
    fn scaling_by_c_adds_the_primes_of_c(op in nilpotent(5), c in 2i64..=12) {
        prop_assume!(op.nilpotency_index() >= 1);
        let base = bad_primes_of_nilpotent(&op).unwrap().set();
        let scaled = bad_primes_of_nilpotent(&op.scaled(&BigInt::from(c)).unwrap()).unwrap().set();
        let mut expected = base;
        expected.extend(prime_factors(c as u64).into_iter().map(BigInt::from));
        prop_assert_eq!(scaled, expected);
    }

    #[test]
    fn unimodular_conjugation_preserves_invariants(op in nilpotent(5), seed in any::<u64>()) {
        let n = op.rank();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (u, u_inv) = unimodular_pair(&mut rng, n);
        let conj = op.conjugate(&u, &u_inv).unwrap();
        prop_assert_eq!(cokernel_torsion_freeness(&op), cokernel_torsion_freeness(&conj));
        prop_assert_eq!(bad_primes_of_nilpotent(&op).unwrap().set(), bad_primes_of_nilpotent(&conj).unwrap().set());
    }
}

fn unimodular_pair(rng: &mut ChaCha8Rng, n: usize) -> (IntMatrix, IntMatrix) {
    use rand::Rng;
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(n);
    if n < 2 {
        return (u, v);
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = BigInt::from(rng.gen_range(-2..=2));
        u.add_row_multiple(i, j, &c);
        v.add_col_multiple(j, i, &-c);
    }
    (u, v)
}

#[test]
fn jordan_block_examples() {
    let op = NilpotentOperator::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]).unwrap();
    assert_eq!(monodromy_filtration_rational(&op).graded_ranks(), vec![1, 0, 1, 0, 1]);
    let op = NilpotentOperator::from_i64(&[&[0, 2], &[0, 0]]).unwrap();
    let primes: Vec<BigInt> = bad_primes_of_nilpotent(&op).unwrap().set().into_iter().collect();
    assert_eq!(primes, vec![BigInt::from(2)]);
    let zero = NilpotentOperator::from_i64(&[&[0, 0], &[0, 0]]).unwrap();
    assert_eq!(monodromy_filtration_rational(&zero).graded_ranks(), vec![2]);
}
