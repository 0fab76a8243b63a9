//! Integer arithmetic helpers: primality, factorization and small modular
//! arithmetic on machine words.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A finite set of primes, ordered.
pub type PrimeSet = BTreeSet<BigInt>;

/// Largest modulus accepted for F_ℓ arithmetic.
pub const MAX_MODULUS: u64 = 1 << 31;

const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the prime `p`; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Miller–Rabin with the first twelve prime bases. Deterministic below
/// 3.3·10^24, which covers every value the toolkit meets at desk scale.
pub fn is_prime(n: &BigInt) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_negative() || n.is_even() {
        return false;
    }
    let one = BigInt::one();
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigInt) -> BigInt {
    // n is odd, composite, and has no factor below the trial-division bound.
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut r = 1u64;
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const M: u64 = 64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..M.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += M;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorization of |n| as (prime, exponent) pairs, ascending.
/// Returns an empty list for n ∈ {−1, 0, 1}.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut m = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    if m <= BigInt::one() {
        return out;
    }
    let push = |p: BigInt, out: &mut Vec<(BigInt, u32)>| match out.iter_mut().find(|(q, _)| *q == p) {
        Some(entry) => entry.1 += 1,
        None => out.push((p, 1)),
    };
    let mut p = 2u64;
    while p < 10_000 {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        while (&m % &bp).is_zero() {
            m /= &bp;
            push(bp.clone(), &mut out);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = Vec::new();
    if !m.is_one() {
        stack.push(m);
    }
    while let Some(k) = stack.pop() {
        if is_prime(&k) {
            push(k, &mut out);
        } else {
            let d = pollard_brent(&k);
            stack.push(&k / &d);
            stack.push(d);
        }
    }
    out.sort();
    out
}

/// The distinct primes dividing |n|.
pub fn prime_divisors(n: &BigInt) -> PrimeSet {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// If `q` is a prime power p^k with k ≥ 1, returns (p, k).
pub fn prime_power(q: &BigInt) -> Option<(BigInt, u32)> {
    let f = factorize(q);
    match f.as_slice() {
        [(p, k)] if q.is_positive() => Some((p.clone(), *k)),
        _ => None,
    }
}

/// The primes up to `bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime_u64(n)).collect()
}

/// Reduces an integer into [0, p).
pub fn reduce_mod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

pub fn check_modulus(ell: u64) -> crate::Result<()> {
    if ell >= MAX_MODULUS || !is_prime_u64(ell) {
        return Err(crate::Error::NotPrime(ell));
    }
    Ok(())
}
