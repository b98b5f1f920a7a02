//! Brute-force oracle for small exact linear programs, independent of the
//! engine under test: enumerate every basic solution of the equality system
//! and keep the feasible ones. Every vertex of the (bounded) feasible polytope
//! is a basic feasible solution, so scanning them all yields exact optima.

#![allow(clippy::needless_range_loop)]

use ivbounds::constraints::{LinearFunctional, LinearProgramSpec, NUM_TYPES};
use ivbounds::rational::Rational;
use num_traits::{Signed, Zero};

/// Exact (min, max) of the functional over the spec's feasible set, or `None`
/// when the feasible set is empty.
pub fn optimum_range(
    spec: &LinearProgramSpec,
    functional: &LinearFunctional,
) -> Option<(Rational, Rational)> {
    let reduced = reduce(spec)?;
    let rank = reduced.len();
    let mut best: Option<(Rational, Rational)> = None;

    let mut columns: Vec<usize> = (0..rank).collect();
    loop {
        if let Some(point) = basic_solution(&reduced, &columns) {
            if point.iter().all(|x| !x.is_negative()) {
                let value: Rational = functional
                    .coefficients()
                    .iter()
                    .zip(&point)
                    .map(|(c, x)| c * x)
                    .sum();
                best = Some(match best {
                    None => (value.clone(), value),
                    Some((lo, hi)) => (lo.min(value.clone()), hi.max(value)),
                });
            }
        }
        if !next_combination(&mut columns, rank, NUM_TYPES) {
            break;
        }
    }
    best
}

/// Row-reduces the augmented system, dropping zero rows; `None` when the
/// equalities are contradictory on their own.
fn reduce(spec: &LinearProgramSpec) -> Option<Vec<Vec<Rational>>> {
    let mut m: Vec<Vec<Rational>> = spec
        .rows()
        .iter()
        .map(|row| {
            let mut r: Vec<Rational> = row.coefficients.to_vec();
            r.push(row.rhs.clone());
            r
        })
        .collect();
    let rows = m.len();
    let mut pivot_row = 0;
    for col in 0..NUM_TYPES {
        let Some(swap) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, swap);
        let pivot = m[pivot_row][col].clone();
        for v in &mut m[pivot_row] {
            *v /= &pivot;
        }
        for r in 0..rows {
            if r != pivot_row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in 0..=NUM_TYPES {
                    let delta = &factor * &m[pivot_row][j];
                    m[r][j] -= delta;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    let mut reduced = Vec::new();
    for row in m {
        let all_zero = row[..NUM_TYPES].iter().all(|c| c.is_zero());
        if all_zero {
            if !row[NUM_TYPES].is_zero() {
                return None; // 0 = nonzero
            }
        } else {
            reduced.push(row);
        }
    }
    Some(reduced)
}

/// Solves the reduced system on the chosen support, zero elsewhere; `None`
/// when the support columns are singular or the system is inconsistent there.
fn basic_solution(reduced: &[Vec<Rational>], columns: &[usize]) -> Option<Vec<Rational>> {
    let k = reduced.len();
    let mut m: Vec<Vec<Rational>> = reduced
        .iter()
        .map(|row| {
            let mut r: Vec<Rational> = columns.iter().map(|&c| row[c].clone()).collect();
            r.push(row[NUM_TYPES].clone());
            r
        })
        .collect();
    for col in 0..k {
        let pivot_row = (col..k).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot_row);
        let pivot = m[col][col].clone();
        for v in &mut m[col] {
            *v /= &pivot;
        }
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in 0..=k {
                    let delta = &factor * &m[col][j];
                    m[r][j] -= delta;
                }
            }
        }
    }
    let mut point = vec![Rational::zero(); NUM_TYPES];
    for (i, &c) in columns.iter().enumerate() {
        point[c] = m[i][k].clone();
    }
    Some(point)
}

/// Advances to the next k-combination of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], k: usize, n: usize) -> bool {
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] != i + n - k {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
