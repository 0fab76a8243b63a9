use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{ElementaryDivisors, IntMatrix};

/// U·A·V = D with U, V unimodular and D diagonal with d_1 | d_2 | … .
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The min(m, n) diagonal entries, zeros last.
    pub fn divisors(&self) -> ElementaryDivisors {
        let k = self.d.nrows().min(self.d.ncols());
        ElementaryDivisors::new((0..k).map(|i| self.d[(i, i)].clone()).collect())
    }
}

fn smallest_nonzero(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.nrows() {
        for j in t..d.ncols() {
            if d[(i, j)].is_zero() {
                continue;
            }
            if best.is_none_or(|(a, b)| d[(i, j)].abs() < d[(a, b)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smith normal form by repeated smallest-pivot Euclidean reduction.
///
/// The pivot is always the entry of least absolute value in the trailing
/// submatrix (first in row-major order on ties), so the output is a
/// deterministic function of the input.
pub fn smith(a: &IntMatrix) -> SmithForm {
    let (m, n) = a.shape();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&d, t) else {
                return SmithForm { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility: pull an offending row into the pivot row.
            let p = d[(t, t)].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

/// Solves A·x = b over the integers; `None` when no integral solution
/// exists. Free coordinates are set to zero.
pub fn solve_integral(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let (m, n) = a.shape();
    assert_eq!(b.len(), m);
    let snf = smith(a);
    let ub = snf.u.apply(b);
    let mut y = vec![BigInt::zero(); n];
    for i in 0..m {
        let di = if i < n { snf.d[(i, i)].clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = ub[i].div_rem(&di);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.v.apply(&y))
}
