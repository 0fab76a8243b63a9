//! Integer row echelon and Hermite normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Row-reduces `m` in place by unimodular row operations, pivoting only in
/// columns `< limit`. Returns the pivot columns; rows at and below
/// `pivots.len()` are zero in the first `limit` columns afterwards.
///
/// Pivot rule: in each column the row with the smallest nonzero absolute
/// value (first on ties) becomes the pivot; the others are reduced by floor
/// division until the column is clear below it. With `reduce_above` the
/// pivot is made positive and entries above it are reduced into `[0, pivot)`,
/// which yields the Hermite normal form.
pub fn echelon(m: &mut IntMatrix, limit: usize, reduce_above: bool) -> Vec<usize> {
    let rows = m.nrows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit.min(m.ncols()) {
        if r == rows {
            break;
        }
        let mut found = false;
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !m[(i, c)].is_zero() && best.is_none_or(|b| m[(i, c)].abs() < m[(b, c)].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            found = true;
            m.swap_rows(b, r);
            let mut clear = true;
            for i in r + 1..rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let q = m[(i, c)].div_floor(&m[(r, c)]);
                m.add_row_multiple(i, r, &-q);
                if !m[(i, c)].is_zero() {
                    clear = false;
                }
            }
            if clear {
                break;
            }
        }
        if !found {
            continue;
        }
        if m[(r, c)].is_negative() {
            m.negate_row(r);
        }
        if reduce_above {
            for i in 0..r {
                let q = m[(i, c)].div_floor(&m[(r, c)]);
                m.add_row_multiple(i, r, &-q);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Hermite normal form of the row span of `m`, zero rows removed.
pub fn row_hnf(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let limit = a.ncols();
    let pivots = echelon(&mut a, limit, true);
    let idx: Vec<usize> = (0..pivots.len()).collect();
    a.select_rows(&idx)
}

/// Basis (as rows) of the integer kernel {x : m·x = 0}. The result is a
/// basis of the full kernel lattice, which is saturated.
pub fn kernel_rows(m: &IntMatrix) -> IntMatrix {
    let (rows, cols) = m.shape();
    let mut aug = m.transpose().hstack(&IntMatrix::identity(cols)).expect("shapes agree");
    let pivots = echelon(&mut aug, rows, false);
    let k = pivots.len();
    let mut out = IntMatrix::zeros(cols - k, cols);
    for (t, i) in (k..cols).enumerate() {
        for j in 0..cols {
            out[(t, j)] = aug[(i, rows + j)].clone();
        }
    }
    row_hnf(&out)
}

/// Pivot column of each row of a row echelon matrix.
pub fn pivot_columns(h: &IntMatrix) -> Vec<usize> {
    h.rows_iter()
        .map(|r| r.iter().position(|x| !x.is_zero()).expect("echelon rows are nonzero"))
        .collect()
}

/// Expresses `v` in the basis given by the rows of the echelon matrix `h`.
/// Returns `None` when `v` is not in the row lattice.
pub fn echelon_coordinates(h: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(h.nrows());
    for (i, c) in pivot_columns(h).into_iter().enumerate() {
        let (q, r) = rest[c].div_rem(&h[(i, c)]);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (x, y) in rest.iter_mut().zip(h.row(i)) {
                *x -= &q * y;
            }
        }
        coords.push(q);
    }
    rest.iter().all(Zero::is_zero).then_some(coords)
}
