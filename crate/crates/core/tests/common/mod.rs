//! Independent oracles for the integration tests. Nothing here calls into
//! the library's algorithms; only its matrix container is shared.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};

use monodromy::exact_linalg::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn to_q_rows(m: &IntMatrix) -> Vec<Vec<Q>> {
    m.rows_iter().map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect()).collect()
}

/// Reduced row echelon form over Q; returns the nonzero rows.
pub fn rref(mut rows: Vec<Vec<Q>>, ncols: usize) -> Vec<Vec<Q>> {
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = &rows[r][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

pub fn rank(rows: &[Vec<Q>], ncols: usize) -> usize {
    rref(rows.to_vec(), ncols).len()
}

/// Basis of {x : rows·x = 0}.
pub fn nullspace(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let r = rref(rows.to_vec(), ncols);
    let pivots: Vec<usize> = r.iter().map(|row| row.iter().position(|x| !x.is_zero()).unwrap()).collect();
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

pub fn apply(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Basis of the column space of m (m has `nrows` rows).
pub fn column_space(m: &[Vec<Q>], nrows: usize, ncols: usize) -> Vec<Vec<Q>> {
    let cols: Vec<Vec<Q>> = (0..ncols).map(|j| (0..nrows).map(|i| m[i][j].clone()).collect()).collect();
    rref(cols, nrows)
}

pub fn intersect(a: &[Vec<Q>], b: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    let mut ann = nullspace(a, n);
    ann.extend(nullspace(b, n));
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    nullspace(&ann, n)
}

pub fn sum(a: &[Vec<Q>], b: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    rref(all, n)
}

pub fn same_span(a: &[Vec<Q>], b: &[Vec<Q>], n: usize) -> bool {
    let ra = rank(a, n);
    ra == rank(b, n) && rank(&sum(a, b, n), n) == ra
}

pub fn contains(big: &[Vec<Q>], small: &[Vec<Q>], n: usize) -> bool {
    rank(&sum(big, small, n), n) == rank(big, n)
}

pub fn mat_pow(m: &[Vec<Q>], e: usize) -> Vec<Vec<Q>> {
    let n = m.len();
    let mut r: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
    for _ in 0..e {
        r = (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &r[i][k] * &m[k][j]).sum()).collect()).collect();
    }
    r
}

/// The monodromy filtration over Q from the closed formula
/// M_k = Σ_j ker N^{j+1} ∩ im N^{max(0, j−k)}, for k in −d−1..=d.
pub fn filtration_oracle(n: &IntMatrix) -> BTreeMap<i64, Vec<Vec<Q>>> {
    let dim = n.nrows();
    let nq = to_q_rows(n);
    let powers: Vec<Vec<Vec<Q>>> = (0..=dim + 1).map(|e| mat_pow(&nq, e)).collect();
    let d = (0..=dim).find(|&e| powers[e + 1].iter().all(|r| r.iter().all(Zero::is_zero))).unwrap_or(dim) as i64;
    let top = (2 * d + 2) as usize;
    let kernels: Vec<Vec<Vec<Q>>> = (0..=top).map(|j| nullspace(&powers[(j + 1).min(dim + 1)], dim)).collect();
    let images: Vec<Vec<Vec<Q>>> = (0..=top).map(|s| column_space(&powers[s.min(dim + 1)], dim, dim)).collect();
    let mut out = BTreeMap::new();
    for k in -d - 1..=d {
        let mut acc = Vec::new();
        for j in 0..=top {
            let s = (j as i64 - k).clamp(0, top as i64) as usize;
            acc = sum(&acc, &intersect(&kernels[j], &images[s], dim), dim);
        }
        out.insert(k, acc);
    }
    out
}

/// Elementary divisors from gcds of k×k minors (small matrices only).
pub fn determinantal_divisors(m: &IntMatrix) -> Vec<BigInt> {
    let (r, c) = m.shape();
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for k in 1..=r.min(c) {
        let mut g = BigInt::zero();
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let sub: Vec<Vec<Q>> =
                    rows.iter().map(|&i| cols.iter().map(|&j| Q::from_integer(m[(i, j)].clone())).collect()).collect();
                g = g.gcd(&det(sub).to_integer());
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

pub fn det(mut a: Vec<Vec<Q>>) -> Q {
    let n = a.len();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Q::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &a[c][j] * &f;
                a[i][j] -= t;
            }
        }
    }
    d
}

/// Res(p, q) as the Sylvester determinant; coefficients low degree first.
pub fn sylvester_resultant(p: &[BigInt], q: &[BigInt]) -> BigInt {
    let (m, n) = (p.len() - 1, q.len() - 1);
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut s = vec![vec![Q::zero(); size]; size];
    for i in 0..n {
        for (k, c) in p.iter().rev().enumerate() {
            s[i][i + k] = Q::from_integer(c.clone());
        }
    }
    for i in 0..m {
        for (k, c) in q.iter().rev().enumerate() {
            s[n + i][i + k] = Q::from_integer(c.clone());
        }
    }
    det(s).to_integer()
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn reduce_poly(p: &[BigInt], ell: u64) -> Vec<u64> {
    let l = BigInt::from(ell);
    trim(p.iter().map(|c| c.mod_floor(&l).to_u64().unwrap()).collect())
}

/// Monic gcd over F_ℓ by Euclid; the zero polynomial is the empty vector.
pub fn gcd_mod(a: &[u64], b: &[u64], ell: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let lc_inv = inv(*b.last().unwrap(), ell);
        while a.len() >= b.len() {
            let f = a.last().unwrap() * lc_inv % ell;
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + ell - f * c % ell) % ell;
            }
            a = trim(a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&lc) = a.last() {
        let li = inv(lc, ell);
        a.iter_mut().for_each(|c| *c = *c * li % ell);
    }
    a
}

pub fn rank_mod(m: &IntMatrix, ell: u64) -> usize {
    let l = BigInt::from(ell);
    let mut rows: Vec<Vec<u64>> =
        m.rows_iter().map(|r| r.iter().map(|x| x.mod_floor(&l).to_u64().unwrap()).collect()).collect();
    let ncols = m.ncols();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let iv = inv(rows[r][c], ell);
        for i in r + 1..rows.len() {
            let f = rows[i][c] * iv % ell;
            for j in 0..ncols {
                rows[i][j] = (rows[i][j] + ell - f * rows[r][j] % ell) % ell;
            }
        }
        r += 1;
    }
    r
}

pub fn prime_factors(mut n: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            out.insert(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.insert(n);
    }
    out
}

pub fn primes_below(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
}

/// Complex roots by Durand–Kerner on a monic-normalized f64 polynomial
/// (coefficients low degree first).
pub fn complex_roots(coeffs: &[f64]) -> Vec<(f64, f64)> {
    let n = coeffs.len() - 1;
    let lc = coeffs[n];
    let c: Vec<f64> = coeffs.iter().map(|x| x / lc).collect();
    let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let eval = |z: (f64, f64)| c.iter().rev().fold((0.0, 0.0), |acc, &k| {
        let m = mul(acc, z);
        (m.0 + k, m.1)
    });
    let mut z: Vec<(f64, f64)> = (0..n).map(|k| {
        let t = 0.4 + 0.9 * k as f64;
        let r = 1.0 + c.iter().map(|x| x.abs()).fold(0.0, f64::max);
        (r * t.cos(), r * t.sin())
    }).collect();
    for _ in 0..2000 {
        for i in 0..n {
            let mut den = (1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den = mul(den, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let num = eval(z[i]);
            let d2 = den.0 * den.0 + den.1 * den.1;
            if d2 == 0.0 {
                continue;
            }
            let q = ((num.0 * den.0 + num.1 * den.1) / d2, (num.1 * den.0 - num.0 * den.1) / d2);
            z[i] = (z[i].0 - q.0, z[i].1 - q.1);
        }
    }
    z
}

/// A random nilpotent integer matrix: a block form with Jordan-type
/// superdiagonal multipliers, conjugated by a unimodular matrix while all
/// entries stay within `bound`.
pub fn random_nilpotent(rng: &mut impl Rng, n: usize, bound: i64) -> IntMatrix {
    let mut jordan = IntMatrix::zeros(n, n);
    let mut start = 0;
    while start < n {
        let size = rng.gen_range(1..=n - start);
        for i in start..start + size - 1 {
            let mult = if rng.gen_bool(0.7) { 1 } else { rng.gen_range(2..=6) };
            jordan[(i, i + 1)] = BigInt::from(mult);
        }
        start += size;
    }
    let bound = BigInt::from(bound);
    let mut u = IntMatrix::identity(n);
    let mut u_inv = IntMatrix::identity(n);
    let mut current = jordan.clone();
    if n < 2 {
        return current;
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 });
        let mut u2 = u.clone();
        u2.add_row_multiple(i, j, &c);
        let mut u2_inv = u_inv.clone();
        u2_inv.add_col_multiple(j, i, &-c.clone());
        let cand = u2.dot(&jordan).dot(&u2_inv);
        if cand.max_abs() > bound {
            break;
        }
        u = u2;
        u_inv = u2_inv;
        current = cand;
    }
    current
}

/// Random monic-free integer polynomial of exact degree `deg`, low first.
pub fn random_poly(rng: &mut impl Rng, deg: usize, bound: i64) -> Vec<BigInt> {
    let mut c: Vec<BigInt> = (0..=deg).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    while c[deg].is_zero() {
        c[deg] = BigInt::from(rng.gen_range(-bound..=bound));
    }
    c
}
