//! Small exact dense linear algebra used by the engine: square solves for
//! dual multipliers and nullspace bases for facet work. Sizes never exceed a
//! few dozen rows, so plain fraction Gaussian elimination is plenty.

// In-place elimination reads one row while mutating another; indexed loops
// express that without fighting the borrow checker.
#![allow(clippy::needless_range_loop)]

use num_traits::Zero;

use crate::rational::Rational;

/// Solves `M x = rhs` for square nonsingular `M`. Returns `None` if singular.
pub(crate) fn solve_square(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        let pivot = m[col][col].clone();
        for j in col..n {
            m[col][j] /= &pivot;
        }
        rhs[col] /= &pivot;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..n {
                    let delta = &factor * &m[col][j];
                    m[r][j] -= delta;
                }
                let delta = &factor * &rhs[col];
                rhs[r] -= delta;
            }
        }
    }
    Some(rhs)
}

/// Returns a basis of the nullspace `{x : M x = 0}` of an arbitrary matrix.
pub(crate) fn nullspace(mut m: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    let rows = m.len();
    let mut pivot_col_of_row = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot_row) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pivot_row);
        let pivot = m[row][col].clone();
        for j in col..cols {
            m[row][j] /= &pivot;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..cols {
                    let delta = &factor * &m[row][j];
                    m[r][j] -= delta;
                }
            }
        }
        pivot_col_of_row.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
    let is_pivot = |c: usize| pivot_cols.contains(&c);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = num_traits::One::one();
        for (r, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Rank of an arbitrary rational matrix.
pub(crate) fn rank(mut m: Vec<Vec<Rational>>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let rows = m.len();
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot_row) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pivot_row);
        let pivot = m[row][col].clone();
        for j in col..cols {
            m[row][j] /= &pivot;
        }
        for r in (row + 1)..rows {
            if !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..cols {
                    let delta = &factor * &m[row][j];
                    m[r][j] -= delta;
                }
            }
        }
        row += 1;
        if row == rows {
            break;
        }
    }
    row
}
