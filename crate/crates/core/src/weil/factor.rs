//! Factorization over Q: square-free decomposition, Cantor–Zassenhaus
//! modulo a small prime, Hensel lifting and recombination of lifted
//! factors (Zassenhaus).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{inv_mod, is_prime_u64, reduce_mod};
use crate::poly::IntPolynomial;

/// Irreducible primitive factors with multiplicities, sorted, such that
/// `f = ±content · ∏ g^e`.
pub fn factor(f: &IntPolynomial) -> Vec<(IntPolynomial, u32)> {
    let mut out = Vec::new();
    for (g, e) in f.square_free_decomposition() {
        for h in factor_square_free(&g) {
            out.push((h, e));
        }
    }
    out.sort();
    out
}

/// Irreducible factors of a primitive square-free polynomial.
pub fn factor_square_free(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let f = f.primitive_part();
    if f.degree() <= 1 {
        return if f.degree() == 1 { vec![f] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut f = f;
    // pull out powers of T first so the constant term is nonzero
    while f.coeff(0).is_zero() {
        out.push(IntPolynomial::from_i64(&[0, 1]));
        f = f.div_exact(&IntPolynomial::from_i64(&[0, 1])).expect("T divides");
    }
    if f.degree() >= 1 {
        out.extend(zassenhaus(&f));
    }
    out.sort();
    out
}

// ---- polynomials over F_p as coefficient vectors, low degree first ----

type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_reduce(f: &IntPolynomial, p: u64) -> Fp {
    trim(f.coeffs().iter().map(|c| reduce_mod(c, p)).collect())
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % p as u128;
        }
    }
    trim(out.into_iter().map(|x| x as u64).collect())
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = b.len();
    assert!(db > 0);
    let inv = inv_mod(b[db - 1], p);
    let mut r = a.clone();
    if r.len() < db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db + 1];
    for k in (0..q.len()).rev() {
        let c = (r[k + db - 1] as u128 * inv as u128 % p as u128) as u64;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                let sub = (c as u128 * bj as u128 % p as u128) as u64;
                r[k + j] = (r[k + j] + p - sub) % p;
            }
        }
        q[k] = c;
    }
    (trim(q), trim(r))
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = inv_mod(l, p);
            a.iter().map(|&x| (x as u128 * inv as u128 % p as u128) as u64).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| (c as u128 * (i as u128 % p as u128) % p as u128) as u64).collect())
}

fn fp_powmod(base: &Fp, exp: &BigUint, m: &Fp, p: u64) -> Fp {
    let mut acc: Fp = vec![1];
    let base = fp_divrem(base, m, p).1;
    for i in (0..exp.bits()).rev() {
        acc = fp_divrem(&fp_mul(&acc, &acc, p), m, p).1;
        if exp.bit(i) {
            acc = fp_divrem(&fp_mul(&acc, &base, p), m, p).1;
        }
    }
    acc
}

/// Distinct-degree factorization of a monic square-free polynomial:
/// pairs (product of all irreducible factors of degree d, d).
fn distinct_degree(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    while f.len() > 1 {
        d += 1;
        if 2 * d > f.len() - 1 {
            let deg = f.len() - 1;
            out.push((f.clone(), deg));
            break;
        }
        h = fp_powmod(&h, &BigUint::from(p), &f, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &f, p);
        if g.len() > 1 {
            out.push((g.clone(), d));
            f = fp_divrem(&f, &g, p).0;
            h = fp_divrem(&h, &f, p).1;
        }
    }
    out
}

/// Equal-degree splitting (odd p) into monic irreducibles of degree d.
fn equal_degree(f: &Fp, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    let exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: Fp = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = fp_sub(&fp_powmod(&a, &exp, f, p), &vec![1], p);
        let g = fp_gcd(&b, f, p);
        if g.len() > 1 && g.len() < f.len() {
            let rest = fp_monic(&fp_divrem(f, &g, p).0, p);
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&rest, d, p, rng));
            return out;
        }
    }
}

fn factor_mod_p(f: &Fp, p: u64) -> Vec<Fp> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p);
    let mut out = Vec::new();
    for (g, d) in distinct_degree(&fp_monic(f, p), p) {
        out.extend(equal_degree(&g, d, p, &mut rng));
    }
    out.sort();
    out
}

// ---- polynomials modulo a prime power m ----

fn zm_reduce(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn zm_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let get = |v: &[BigInt], i: usize| v.get(i).cloned().unwrap_or_default();
    zm_reduce(&(0..n).map(|i| get(a, i) + get(b, i)).collect::<Vec<_>>(), m)
}

fn zm_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let get = |v: &[BigInt], i: usize| v.get(i).cloned().unwrap_or_default();
    zm_reduce(&(0..n).map(|i| get(a, i) - get(b, i)).collect::<Vec<_>>(), m)
}

fn zm_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zm_reduce(&out, m)
}

/// Division by a monic polynomial modulo m.
fn zm_divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = b.len();
    debug_assert!(b[db - 1].is_one());
    let mut r = a.to_vec();
    if r.len() < db {
        return (Vec::new(), zm_reduce(&r, m));
    }
    let mut q = vec![BigInt::zero(); r.len() - db + 1];
    for k in (0..q.len()).rev() {
        let c = r[k + db - 1].mod_floor(m);
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &c * bj;
            }
        }
        q[k] = c;
    }
    (zm_reduce(&q, m), zm_reduce(&r, m))
}

fn lift_fp(a: &Fp) -> Vec<BigInt> {
    a.iter().map(|&x| BigInt::from(x)).collect()
}

/// Extended Euclid over F_p: s·a + t·b = 1 for coprime a, b.
fn fp_bezout(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t2 = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        (r0, r1, s0, s1, t0, t1) = (r1, r, s1, s2, t1, t2);
    }
    assert_eq!(r0.len(), 1, "factors are not coprime mod p");
    let inv = inv_mod(r0[0], p);
    let sc = |v: &Fp| v.iter().map(|&x| (x as u128 * inv as u128 % p as u128) as u64).collect::<Fp>();
    (sc(&s0), sc(&t0))
}

/// Lifts f ≡ g·h (mod p), h monic, to modulus ≥ `bound` by quadratic
/// Hensel steps; returns (g, h, modulus).
fn hensel_pair(f: &[BigInt], g: &Fp, h: &Fp, p: u64, bound: &BigInt) -> (Vec<BigInt>, Vec<BigInt>, BigInt) {
    let (s, t) = fp_bezout(g, h, p);
    let (mut g, mut h, mut s, mut t) = (lift_fp(g), lift_fp(h), lift_fp(&s), lift_fp(&t));
    let mut m = BigInt::from(p);
    while &m < bound {
        let m2 = &m * &m;
        let e = zm_sub(&zm_reduce(f, &m2), &zm_mul(&g, &h, &m2), &m2);
        let (q, r) = zm_divrem_monic(&zm_mul(&s, &e, &m2), &h, &m2);
        let g2 = zm_add(&zm_add(&g, &zm_mul(&t, &e, &m2), &m2), &zm_mul(&q, &g, &m2), &m2);
        let h2 = zm_add(&h, &r, &m2);
        let b = zm_sub(&zm_add(&zm_mul(&s, &g2, &m2), &zm_mul(&t, &h2, &m2), &m2), &[BigInt::one()], &m2);
        let (c, d) = zm_divrem_monic(&zm_mul(&s, &b, &m2), &h2, &m2);
        s = zm_sub(&s, &d, &m2);
        t = zm_sub(&zm_sub(&t, &zm_mul(&t, &b, &m2), &m2), &zm_mul(&c, &g2, &m2), &m2);
        g = g2;
        h = h2;
        m = m2;
    }
    (g, h, m)
}

/// Lifts the monic mod-p factors of f (whose leading coefficient is a unit
/// mod p) to monic factors modulo the common final modulus.
fn hensel_all(f: &[BigInt], factors: &[Fp], p: u64, bound: &BigInt) -> (Vec<Vec<BigInt>>, BigInt) {
    if factors.len() == 1 {
        let mut m = BigInt::from(p);
        while &m < bound {
            m = &m * &m;
        }
        let lc = f.last().expect("nonzero").mod_floor(&m);
        let inv = lc.modinv(&m).expect("leading coefficient is a unit");
        let monic = zm_reduce(&f.iter().map(|c| c * &inv).collect::<Vec<_>>(), &m);
        return (vec![monic], m);
    }
    let half = factors.len() / 2;
    let (left, right) = factors.split_at(half);
    let fbar: Fp = trim(f.iter().map(|c| reduce_mod(c, p)).collect());
    let h0 = right.iter().fold(vec![1u64], |acc, x| fp_mul(&acc, x, p));
    let g0 = fp_divrem(&fbar, &h0, p).0;
    let (g, h, m) = hensel_pair(f, &g0, &h0, p, bound);
    let (mut a, _) = hensel_all(&g, left, p, bound);
    let (b, _) = hensel_all(&h, right, p, bound);
    a.extend(b);
    (a, m)
}

fn symmetric(a: &[BigInt], m: &BigInt) -> IntPolynomial {
    let half: BigInt = m / 2;
    IntPolynomial::new(a.iter().map(|c| if c > &half { c - m } else { c.clone() }).collect())
}

/// Upper bound for the coefficients of any factor of f (Mignotte), times
/// the leading coefficient.
fn factor_coefficient_bound(f: &IntPolynomial) -> BigInt {
    let n = f.degree() as u32;
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + 1u32;
    (BigInt::one() << n) * norm * f.leading().abs()
}

fn zassenhaus(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let lc = f.leading();
    let mut p = 3u64;
    let modp = loop {
        if is_prime_u64(p) && !(&lc % p).is_zero() {
            let fb = fp_reduce(f, p);
            if fp_gcd(&fb, &fp_derivative(&fb, p), p).len() == 1 {
                break fb;
            }
        }
        p += 2;
    };
    let local = factor_mod_p(&modp, p);
    if local.len() == 1 {
        return vec![f.clone()];
    }
    let bound = factor_coefficient_bound(f) * 2u32 + 1u32;
    let (mut lifted, m) = hensel_all(f.coeffs(), &local, p, &bound);

    let mut out = Vec::new();
    let mut g = f.clone();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in subsets(lifted.len(), size) {
            let lcg = g.leading();
            let prod = subset.iter().fold(vec![lcg.clone()], |acc, &i| zm_mul(&acc, &lifted[i], &m));
            let cand = symmetric(&prod, &m).primitive_part();
            if let Some(q) = g.div_exact(&cand) {
                out.push(cand);
                g = q.primitive_part();
                lifted = lifted.into_iter().enumerate().filter(|(i, _)| !subset.contains(i)).map(|(_, x)| x).collect();
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    out.push(g);
    out
}

/// All k-subsets of 0..n in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
