//! Dense linear algebra over F_p for primes p < 2^31.

use std::fmt;

use num_bigint::BigInt;

use super::IntMatrix;
use crate::arith::{inv_mod, reduce_mod};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        ModMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::shape("ragged rows in F_p matrix"));
            }
            data.extend(r.iter().map(|x| x % p));
        }
        Ok(ModMatrix { p, rows: rows.len(), cols, data })
    }

    pub fn from_i64(p: u64, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.iter().map(move |&x| x.rem_euclid(p as i64) as u64)).collect();
        ModMatrix { p, rows: rows.len(), cols, data }
    }

    /// Entrywise reduction of an integer matrix.
    pub fn reduce(m: &IntMatrix, p: u64) -> Self {
        let data = m.entries().iter().map(|x| reduce_mod(x, p)).collect();
        ModMatrix { p, rows: m.nrows(), cols: m.ncols(), data }
    }

    /// Symmetric lift to integers in (−p/2, p/2].
    pub fn lift(&self) -> IntMatrix {
        let half = self.p / 2;
        let data: Vec<i64> =
            self.data.iter().map(|&x| if x > half { x as i64 - self.p as i64 } else { x as i64 }).collect();
        IntMatrix::from_vec_i64(self.rows, self.cols, data)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &ModMatrix) -> Result<ModMatrix> {
        if self.cols != other.rows || self.p != other.p {
            return Err(Error::shape("incompatible F_p matrix product"));
        }
        let p = self.p as u128;
        let mut out = Self::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: u128 = 0;
                for k in 0..self.cols {
                    acc += self.get(i, k) as u128 * other.get(k, j) as u128;
                }
                out.data[i * other.cols + j] = (acc % p) as u64;
            }
        }
        Ok(out)
    }

    pub fn dot(&self, other: &ModMatrix) -> ModMatrix {
        self.mul(other).expect("F_p shapes agree")
    }

    pub fn add(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.shape(), other.shape());
        let data = self.data.iter().zip(&other.data).map(|(a, b)| (a + b) % self.p).collect();
        ModMatrix { data, ..self.clone() }
    }

    pub fn sub(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.shape(), other.shape());
        let data = self.data.iter().zip(&other.data).map(|(a, b)| (a + self.p - b) % self.p).collect();
        ModMatrix { data, ..self.clone() }
    }

    pub fn scale(&self, c: u64) -> ModMatrix {
        let c = c % self.p;
        let data = self.data.iter().map(|&a| ((a as u128 * c as u128) % self.p as u128) as u64).collect();
        ModMatrix { data, ..self.clone() }
    }

    pub fn pow(&self, e: usize) -> ModMatrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Self::identity(self.p, self.rows);
        for _ in 0..e {
            acc = acc.dot(self);
        }
        acc
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p as u128;
        (0..self.rows)
            .map(|i| (self.row(i).iter().zip(v).map(|(&a, &b)| a as u128 * b as u128).sum::<u128>() % p) as u64)
            .collect()
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (ModMatrix, Vec<usize>) {
        let p = self.p;
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(piv) = (r..a.rows).find(|&i| a.get(i, c) != 0) else { continue };
            if piv != r {
                for j in 0..a.cols {
                    a.data.swap(piv * a.cols + j, r * a.cols + j);
                }
            }
            let inv = inv_mod(a.get(r, c), p);
            for j in 0..a.cols {
                let v = a.get(r, j);
                a.data[r * a.cols + j] = ((v as u128 * inv as u128) % p as u128) as u64;
            }
            for i in 0..a.rows {
                if i == r {
                    continue;
                }
                let f = a.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in 0..a.cols {
                    let sub = ((f as u128 * a.get(r, j) as u128) % p as u128) as u64;
                    a.data[i * a.cols + j] = (a.get(i, j) + p - sub) % p;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {x : self·x = 0}, as the rows of the returned matrix.
    pub fn kernel(&self) -> ModMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(self.p, free.len(), self.cols);
        for (t, &f) in free.iter().enumerate() {
            k.data[t * self.cols + f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let v = r.get(i, f);
                k.data[t * self.cols + pc] = (self.p - v) % self.p;
            }
        }
        k
    }

    pub fn inverse(&self) -> Option<ModMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j);
            }
            aug.data[i * 2 * n + n + i] = 1 % self.p;
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return if n == 0 { Some(self.clone()) } else { None };
        }
        let mut inv = Self::zeros(self.p, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = r.get(i, n + j);
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModMatrix(p={}){:?}", self.p, self.to_rows())
    }
}

/// A subspace of F_p^n stored by the reduced row echelon form of a basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    dim: usize,
    basis: ModMatrix,
}

impl Subspace {
    pub fn span(rows: &ModMatrix) -> Self {
        let (r, pivots) = rows.rref();
        let k = pivots.len();
        let mut basis = ModMatrix::zeros(rows.modulus(), k, rows.ncols());
        for i in 0..k {
            for j in 0..rows.ncols() {
                basis.data[i * rows.ncols() + j] = r.get(i, j);
            }
        }
        Subspace { dim: rows.ncols(), basis }
    }

    pub fn zero(p: u64, n: usize) -> Self {
        Subspace { dim: n, basis: ModMatrix::zeros(p, 0, n) }
    }

    pub fn full(p: u64, n: usize) -> Self {
        Subspace { dim: n, basis: ModMatrix::identity(p, n) }
    }

    pub fn kernel_of(m: &ModMatrix) -> Self {
        Self::span(&m.kernel())
    }

    pub fn image_of(m: &ModMatrix) -> Self {
        Self::span(&m.transpose())
    }

    pub fn modulus(&self) -> u64 {
        self.basis.modulus()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &ModMatrix {
        &self.basis
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.to_rows();
        rows.extend(other.basis.to_rows());
        Self::span(&ModMatrix::from_rows(self.modulus(), &rows, self.dim).expect("same ambient"))
    }

    pub fn annihilator(&self) -> Subspace {
        Self::span(&self.basis.kernel())
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.sum(other).dim() == self.dim()
    }

    pub fn contains_vector(&self, v: &[u64]) -> bool {
        let m = ModMatrix::from_rows(self.modulus(), &[v.to_vec()], self.dim).expect("vector length");
        self.contains(&Subspace::span(&m))
    }

    pub fn map(&self, m: &ModMatrix) -> Subspace {
        let rows = self.basis.dot(&m.transpose());
        Self::span(&rows)
    }

    /// {x : m·x ∈ target}.
    pub fn preimage(m: &ModMatrix, target: &Subspace) -> Subspace {
        let ann = target.annihilator();
        Self::kernel_of(&ann.basis.dot(m))
    }
}

/// Lifts an integer vector to a row of residues.
pub fn reduce_vector(v: &[BigInt], p: u64) -> Vec<u64> {
    v.iter().map(|x| reduce_mod(x, p)).collect()
}
