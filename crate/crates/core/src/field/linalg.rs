//! Exact linear algebra over the rationals, plus determinants of
//! rational-function matrices. Sizes here are small (operator degrees), so
//! plain fraction-arithmetic Gaussian elimination is the right tool.

use num_traits::{One, Zero};

use super::rational::Rational;
use super::ratfun::RationalFunction;

/// Reduced row echelon form in place. Returns the pivot columns in order.
pub(crate) fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for c2 in 0..ncols {
                    let sub = &rows[r][c2] * &factor;
                    rows[i][c2] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    rows.retain(|row| row.iter().any(|x| !x.is_zero()));
    pivots
}

/// Basis of `{v : M v = 0}` for the matrix given by `rows` (each of length
/// `ncols`). Basis vectors have a 1 in their free coordinate.
pub(crate) fn nullspace(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    for row in &rows {
        debug_assert_eq!(row.len(), ncols);
    }
    let pivots = rref(&mut rows);
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -rows[i][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `M v = rhs`; `None` when inconsistent. Free coordinates are set
/// to zero, so the solution is deterministic.
pub(crate) fn solve(
    rows: &[Vec<Rational>],
    rhs: &[Rational],
    ncols: usize,
) -> Option<Vec<Rational>> {
    let mut aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&ncols) {
        return None; // pivot in the augmented column
    }
    let mut v = vec![Rational::zero(); ncols];
    for (i, &p) in pivots.iter().enumerate() {
        v[p] = aug[i][ncols].clone();
    }
    Some(v)
}

/// Determinant of a square rational-function matrix by fraction-arithmetic
/// Gaussian elimination.
pub(crate) fn det_rf(mut m: Vec<Vec<RationalFunction>>) -> RationalFunction {
    let n = m.len();
    for row in &m {
        debug_assert_eq!(row.len(), n);
    }
    let mut det = RationalFunction::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return RationalFunction::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -&det;
        }
        let pivot = m[c][c].clone();
        det = &det * &pivot;
        let inv = pivot.inv().expect("pivot is nonzero");
        for i in (c + 1)..n {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] * &inv;
            for c2 in c..n {
                let sub = &m[c][c2] * &factor;
                m[i][c2] = &m[i][c2] - &sub;
            }
        }
    }
    det
}
