mod common;

use common::*;
use monodromy::families::{
    almost_all_iso, fiber_map_vanishes, vanishing_for_almost_all, weight_certify_family, zero_map, FamilyMap,
    IntegralFamily, IsoVerdict,
};
use monodromy::poly::IntPolynomial;
use monodromy::weil::characteristic_polynomial;
use monodromy::{Error, IntMatrix};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn companion(p: &IntPolynomial) -> IntMatrix {
    let n = p.degree() as usize;
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        if i + 1 < n {
            m[(i + 1, i)] = BigInt::from(1);
        }
        m[(i, n - 1)] = -p.coeff(i);
    }
    m
}

fn weil_quadratics(big_q: i64) -> impl Strategy<Value = IntPolynomial> {
    let tmax = ((4 * big_q) as f64).sqrt().floor() as i64;
    prop::collection::vec(-tmax..=tmax, 1..=2).prop_map(move |ts| {
        ts.iter().fold(IntPolynomial::one(), |p, &t| p.mul(&IntPolynomial::from_i64(&[big_q, -t, 1])))
    })
}

fn square(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-4i64..=4, n * n).prop_map(move |v| IntMatrix::from_vec_i64(n, n, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn weight_is_stable_under_powers_of_frobenius(p in weil_quadratics(3), n in 1u32..=3) {
        let f = companion(&p);
        let fam = IntegralFamily::from_frobenius(f.clone()).unwrap();
        let q = BigInt::from(3);
        let cert = weight_certify_family(&fam, &q, 1, None).unwrap();
        prop_assert_eq!(cert.polynomial(), &p);
        let power = IntegralFamily::from_frobenius(f.pow(n as usize).unwrap()).unwrap();
        prop_assert!(weight_certify_family(&power, &q, n, None).is_ok());
        if n > 1 {
            prop_assert!(
                matches!(weight_certify_family(&power, &q, 1, None), Err(Error::NotOfWeight { .. })),
                "weight 1 claimed for the {}-th power", n
            );
        }
    }

    #[test]
    fn iso_bad_primes_are_the_primes_where_the_determinant_vanishes(m in square(3)) {
        let fam = IntegralFamily::from_frobenius(IntMatrix::identity(3)).unwrap();
        let map = FamilyMap::new(fam.clone(), fam, m.clone()).unwrap();
        let det = det(to_q_rows(&m)).to_integer();
        match almost_all_iso(&map).unwrap() {
            IsoVerdict::NoPrime { .. } => prop_assert_eq!(det, BigInt::from(0)),
            IsoVerdict::AlmostAll { bad_primes } => {
                let expected: Vec<BigInt> = prime_factors(det.magnitude().to_u64().unwrap()).into_iter().map(BigInt::from).collect();
                prop_assert_eq!(bad_primes.keys().cloned().collect::<Vec<_>>(), expected);
                for ell in primes_below(40) {
                    let iso = map.fiber_map(ell).unwrap().is_invertible();
                    prop_assert_eq!(iso, rank_mod(&m, ell) == 3);
                    prop_assert_eq!(iso, !bad_primes.contains_key(&BigInt::from(ell)));
                }
            }
        }
    }

    #[test]
    fn maps_between_distinct_weights_vanish_outside_the_bezout_primes(p1 in weil_quadratics(2), p2 in weil_quadratics(4)) {
        let q = BigInt::from(2);
        let s = IntegralFamily::from_frobenius(companion(&p1)).unwrap();
        let t = IntegralFamily::from_frobenius(companion(&p2)).unwrap();
        let map = zero_map(s, t).unwrap();
        let report = vanishing_for_almost_all(&map, &q, 1, 2).unwrap();
        for ell in primes_below(60).into_iter().filter(|l| !report.primes.contains_key(&BigInt::from(*l))) {
            prop_assert!(fiber_map_vanishes(&map, ell).unwrap());
            let g = gcd_mod(&reduce_poly(p1.coeffs(), ell), &reduce_poly(p2.coeffs(), ell), ell);
            prop_assert_eq!(g, vec![1]);
        }
    }
}

#[test]
fn charpoly_of_companion_round_trips() {
    let p: IntPolynomial = "T^4-2T^3+5T^2-8T+16".parse().unwrap();
    assert_eq!(characteristic_polynomial(&companion(&p)).unwrap(), p);
}

#[test]
fn non_weil_frobenius_is_rejected() {
    let fam = IntegralFamily::from_frobenius(IntMatrix::from_i64(&[&[1, 0], &[0, 2]])).unwrap();
    assert!(matches!(weight_certify_family(&fam, &BigInt::from(2), 1, None), Err(Error::NotOfWeight { w: 1, .. })));
}
