mod common;

use common::*;
use monodromy::exact_linalg::smith::{smith, solve_integral};
use monodromy::exact_linalg::{cokernel_invariants, kernel, rank_mod_ell, IntMatrix, Lattice, LatticeMap, Sublattice};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |v| IntMatrix::from_vec_i64(r, c, v))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(a in matrix(5, 5, 9)) {
        let s = smith(&a);
        prop_assert_eq!(s.u.dot(&a).dot(&s.v), s.d.clone());
        prop_assert!(s.u.det().unwrap().abs().is_one());
        prop_assert!(s.v.det().unwrap().abs().is_one());
        let d = s.divisors();
        let nz: Vec<&BigInt> = d.as_slice().iter().filter(|x| !x.is_zero()).collect();
        for w in nz.windows(2) {
            prop_assert!((w[1] % w[0]).is_zero());
        }
        prop_assert!(nz.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn divisors_match_determinantal_divisors(a in matrix(4, 4, 6)) {
        let ours: Vec<BigInt> = smith(&a).divisors().as_slice().iter().filter(|x| !x.is_zero()).cloned().collect();
        prop_assert_eq!(ours, determinantal_divisors(&a));
    }

    #[test]
    fn kernel_is_saturated_and_complete(a in matrix(5, 6, 7)) {
        let k = kernel(&LatticeMap::from_matrix(a.clone()));
        prop_assert!(a.dot(&k.basis().transpose()).is_zero());
        prop_assert_eq!(k.rank(), a.ncols() - rank(&to_q_rows(&a), a.ncols()));
        prop_assert!(k.is_saturated());
    }

    #[test]
    fn cokernel_torsion_predicts_rank_drops(a in matrix(4, 4, 12)) {
        let inv = cokernel_invariants(&LatticeMap::from_matrix(a.clone()));
        let rq = rank(&to_q_rows(&a), a.ncols());
        for ell in [2u64, 3, 5, 7, 11] {
            let r = rank_mod_ell(&LatticeMap::from_matrix(a.clone()), ell).unwrap();
            prop_assert_eq!(r, rank_mod(&a, ell));
            let divides = inv.torsion().iter().any(|t| (t % BigInt::from(ell)).is_zero());
            prop_assert_eq!(r < rq, divides);
        }
    }

    #[test]
    fn saturation_is_the_rational_closure(a in matrix(4, 5, 8)) {
        let s = Sublattice::new(Lattice::new(a.nrows()), &a).unwrap();
        let sat = s.saturate();
        prop_assert!(sat.is_saturated());
        prop_assert!(sat.contains(&s));
        prop_assert!(same_span(&to_q_rows(sat.basis()), &to_q_rows(s.basis()), a.nrows()));
        let index: BigInt = cokernel_invariants(&LatticeMap::from_matrix(a.clone())).torsion().iter().product();
        prop_assert_eq!(index.is_one(), s.is_saturated());
    }

    #[test]
    fn sum_and_intersection_agree_with_rational_spans(a in matrix(3, 4, 5), b in matrix(3, 4, 5)) {
        let n = a.nrows().max(b.nrows());
        let pad = |m: &IntMatrix| {
            let mut p = IntMatrix::zeros(n, m.ncols());
            p.set_block(0, 0, m);
            p
        };
        let (a, b) = (pad(&a), pad(&b));
        let sa = Sublattice::new(Lattice::new(n), &a).unwrap().saturate();
        let sb = Sublattice::new(Lattice::new(n), &b).unwrap().saturate();
        let (qa, qb) = (to_q_rows(sa.basis()), to_q_rows(sb.basis()));
        prop_assert!(same_span(&to_q_rows(sa.sum(&sb).basis()), &sum(&qa, &qb, n), n));
        let meet = sa.intersect(&sb);
        prop_assert!(same_span(&to_q_rows(meet.basis()), &intersect(&qa, &qb, n), n));
        prop_assert!(sa.contains(&meet) && sb.contains(&meet));
    }

    #[test]
    fn integral_solutions_solve(a in matrix(4, 4, 6), x in prop::collection::vec(-5i64..=5, 4)) {
        let x: Vec<BigInt> = x.into_iter().take(a.ncols()).map(BigInt::from).collect();
        let x = if x.len() < a.ncols() { vec![BigInt::zero(); a.ncols()] } else { x };
        let b = a.apply(&x);
        let y = solve_integral(&a, &b).expect("b is in the image");
        prop_assert_eq!(a.apply(&y), b);
    }

    #[test]
    fn preimage_contains_exactly_the_vectors_mapping_inside(m in matrix(3, 3, 4), t in matrix(3, 2, 4)) {
        let n = m.nrows();
        let mut tt = IntMatrix::zeros(n, t.ncols());
        tt.set_block(0, 0, &t.block(0, 0, t.nrows().min(n), t.ncols()));
        let target = Sublattice::new(Lattice::new(n), &tt).unwrap();
        let sq = {
            let mut s = IntMatrix::zeros(n, n);
            s.set_block(0, 0, &m.block(0, 0, n, m.ncols().min(n)));
            s
        };
        let pre = Sublattice::preimage(&sq, &target).unwrap();
        for row in pre.basis().rows_iter() {
            prop_assert!(target.contains_vector(&sq.apply(row)));
        }
        for e in 0..n {
            let mut v = vec![BigInt::zero(); n];
            v[e] = BigInt::one();
            prop_assert_eq!(pre.contains_vector(&v), target.contains_vector(&sq.apply(&v)));
        }
    }
}

#[test]
fn spec_examples() {
    let d = smith(&IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])).divisors();
    assert_eq!(d.as_slice(), &[BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    let inv = cokernel_invariants(&LatticeMap::from_matrix(IntMatrix::from_i64(&[&[2, 0], &[0, 0]])));
    assert_eq!(inv.as_slice(), &[BigInt::from(2), BigInt::zero()]);
}
