mod common;

use common::*;
use monodromy::exact_linalg::ModMatrix;
use monodromy::filtration::{bad_primes_of_nilpotent, monodromy_filtration_rational, NilpotentOperator};
use monodromy::modl::{exp_nilpotent, filtration_mod_ell, log_unipotent, property_tf_check, ModlOperator, TfWitness};
use monodromy::Error;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unipotent(rng: &mut ChaCha8Rng, n: usize, ell: u64) -> ModMatrix {
    let mut t = ModMatrix::identity(ell, n);
    for i in 0..n {
        for j in i + 1..n {
            t.set(i, j, rng.gen_range(0..ell));
        }
    }
    loop {
        let mut p = ModMatrix::zeros(ell, n, n);
        for i in 0..n {
            for j in 0..n {
                p.set(i, j, rng.gen_range(0..ell));
            }
        }
        if let Some(pi) = p.inverse() {
            return p.dot(&t).dot(&pi);
        }
    }
}

const PRIMES: [u64; 8] = [7, 11, 13, 17, 19, 23, 29, 31];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn log_and_exp_are_inverse(n in 1usize..=6, k in 0usize..8, seed in any::<u64>()) {
        let ell = PRIMES[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = ModlOperator::unipotent(unipotent(&mut rng, n, ell)).unwrap();
        let l = log_unipotent(&u).unwrap();
        prop_assert!(l.matrix().pow(n).is_zero());
        prop_assert_eq!(exp_nilpotent(&l).unwrap(), u);
    }

    #[test]
    fn sigma_minus_one_and_log_give_the_same_filtration(n in 1usize..=6, k in 0usize..8, seed in any::<u64>()) {
        let ell = PRIMES[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = ModlOperator::unipotent(unipotent(&mut rng, n, ell)).unwrap();
        let fil = filtration_mod_ell(&u).unwrap();
        let via_log = filtration_mod_ell(&ModlOperator::unipotent(exp_nilpotent(&log_unipotent(&u).unwrap()).unwrap().matrix().clone()).unwrap()).unwrap();
        prop_assert_eq!(fil.graded_ranks(), via_log.graded_ranks());
        let g = fil.graded_ranks();
        let rev: Vec<usize> = g.iter().rev().copied().collect();
        prop_assert_eq!(g, rev);
    }

    #[test]
    fn tf_check_is_decided_by_the_bad_primes(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let op = NilpotentOperator::new(random_nilpotent(&mut rng, n, 20)).unwrap();
        let bad = bad_primes_of_nilpotent(&op).unwrap();
        for ell in primes_below(30) {
            let tf = property_tf_check(&op, ell).unwrap();
            prop_assert_eq!(tf.filtrations_agree, tf.cokernels_torsion_free);
            prop_assert_eq!(tf.holds(), !bad.contains(&BigInt::from(ell)));
        }
    }

    #[test]
    fn reduction_has_rational_graded_dims_away_from_bad_primes(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let op = NilpotentOperator::new(random_nilpotent(&mut rng, n, 20)).unwrap();
        let bad = bad_primes_of_nilpotent(&op).unwrap();
        let ranks = monodromy_filtration_rational(&op).graded_ranks();
        for ell in primes_below(30).into_iter().filter(|&l| !bad.contains(&BigInt::from(l))) {
            let u = ModlOperator::unipotent_from_integral(&op, ell).unwrap();
            prop_assert_eq!(filtration_mod_ell(&u).unwrap().graded_ranks(), ranks.clone());
        }
    }
}

#[test]
fn series_need_large_ell() {
    let u = ModlOperator::unipotent(ModMatrix::from_i64(2, &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]])).unwrap();
    assert!(matches!(log_unipotent(&u), Err(Error::ModulusTooSmall { ell: 2, dim: 3 })));
    assert_eq!(filtration_mod_ell(&u).unwrap().graded_ranks(), vec![1, 0, 1, 0, 1]);
}

#[test]
fn documented_examples() {
    let u = ModlOperator::unipotent(ModMatrix::from_i64(5, &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]])).unwrap();
    assert_eq!(log_unipotent(&u).unwrap().matrix(), &ModMatrix::from_i64(5, &[&[0, 1, 2], &[0, 0, 1], &[0, 0, 0]]));
    let n = ModlOperator::nilpotent(ModMatrix::from_i64(7, &[&[0, 1], &[0, 0]])).unwrap();
    assert_eq!(exp_nilpotent(&n).unwrap().matrix(), &ModMatrix::from_i64(7, &[&[1, 1], &[0, 1]]));

    let op = NilpotentOperator::from_i64(&[&[0, 6], &[0, 0]]).unwrap();
    assert!(property_tf_check(&op, 5).unwrap().holds());
    let tf = property_tf_check(&op, 3).unwrap();
    assert!(!tf.holds());
    assert!(matches!(tf.torsion_witness, Some(TfWitness::CokernelTorsion { power: 1, .. })));
    assert!(matches!(tf.step_witness, Some(TfWitness::StepMismatch { index: -1, .. })));
}
