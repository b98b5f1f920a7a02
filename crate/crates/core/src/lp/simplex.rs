//! Two-phase primal simplex over exact rationals with Bland's anti-cycling
//! pivot rule. Phase one certifies feasibility (or yields an exact Farkas
//! certificate); redundant rows are detected there and dropped before phase
//! two, which is why duplicated or linearly dependent equality rows are
//! harmless. Dual multipliers are recovered at the optimum by a direct solve
//! against the final basis.

use num_traits::{One, Signed, Zero};

use crate::constraints::{EqualityRow, NUM_TYPES};
use crate::rational::Rational;

use super::linalg::solve_square;

pub(crate) enum RawOutcome {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
        /// One multiplier per original row, zeros on rows dropped as redundant.
        duals: Vec<Rational>,
    },
    Infeasible {
        /// Farkas multipliers `y` with `y'A <= 0` componentwise and `y'b > 0`.
        certificate: Vec<Rational>,
    },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    cost: Vec<Rational>,
    objective: Rational,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, p: usize, q: usize) {
        let pivot = self.rows[p][q].clone();
        debug_assert!(!pivot.is_zero());
        if !pivot.is_one() {
            for value in self.rows[p].iter_mut() {
                if !value.is_zero() {
                    *value /= &pivot;
                }
            }
            self.rhs[p] /= &pivot;
        }
        let pivot_row = std::mem::take(&mut self.rows[p]);
        for i in 0..self.rows.len() {
            if i == p || self.rows[i][q].is_zero() {
                continue;
            }
            let factor = self.rows[i][q].clone();
            for (j, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    let delta = &factor * pv;
                    self.rows[i][j] -= delta;
                }
            }
            let delta = &factor * &self.rhs[p];
            self.rhs[i] -= delta;
        }
        let reduced = self.cost[q].clone();
        if !reduced.is_zero() {
            for (j, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    let delta = &reduced * pv;
                    self.cost[j] -= delta;
                }
            }
            let delta = &reduced * &self.rhs[p];
            self.objective += delta;
        }
        self.rows[p] = pivot_row;
        self.basis[p] = q;
    }

    /// Minimizes the current objective; only structural columns may enter.
    fn run_bland(&mut self) {
        loop {
            let Some(q) = (0..NUM_TYPES).find(|&j| self.cost[j].is_negative()) else {
                return;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][q].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][q];
                let better = match &leaving {
                    None => true,
                    Some((best_row, best_ratio)) => {
                        ratio < *best_ratio
                            || (ratio == *best_ratio && self.basis[i] < self.basis[*best_row])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let (p, _) = leaving
                .expect("objective is bounded: the feasible set sits inside the simplex");
            self.pivot(p, q);
        }
    }
}

/// Minimizes `objective . q` subject to the equality rows and `q >= 0`.
pub(crate) fn solve_min(rows: &[EqualityRow], objective: &[Rational; NUM_TYPES]) -> RawOutcome {
    let m = rows.len();

    // Normalize signs so every right-hand side is nonnegative.
    let mut signs = vec![false; m]; // true = row negated
    let mut coeffs: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    for (i, row) in rows.iter().enumerate() {
        if row.rhs.is_negative() {
            signs[i] = true;
            coeffs.push(row.coefficients.iter().map(|c| -c).collect());
            rhs.push(-row.rhs.clone());
        } else {
            coeffs.push(row.coefficients.to_vec());
            rhs.push(row.rhs.clone());
        }
    }

    // Phase one: minimize the total artificial mass. Artificial columns are
    // kept in the tableau (they carry the dual information) but never enter.
    let ncols = NUM_TYPES + m;
    let mut tableau = {
        let mut t_rows = Vec::with_capacity(m);
        for (i, row) in coeffs.iter().enumerate() {
            let mut full = vec![Rational::zero(); ncols];
            full[..NUM_TYPES].clone_from_slice(row);
            full[NUM_TYPES + i] = Rational::one();
            t_rows.push(full);
        }
        let mut cost = vec![Rational::zero(); ncols];
        for (j, slot) in cost.iter_mut().enumerate().take(NUM_TYPES) {
            *slot = -coeffs.iter().map(|row| &row[j]).sum::<Rational>();
        }
        let objective = rhs.iter().sum();
        Tableau {
            rows: t_rows,
            rhs: rhs.clone(),
            cost,
            objective,
            basis: (NUM_TYPES..NUM_TYPES + m).collect(),
        }
    };
    tableau.run_bland();

    if tableau.objective.is_positive() {
        // Farkas certificate from the phase-one duals, folded back through the
        // sign normalization.
        let mut certificate = Vec::with_capacity(m);
        for (i, &negated) in signs.iter().enumerate() {
            let y = Rational::one() - &tableau.cost[NUM_TYPES + i];
            certificate.push(if negated { -y } else { y });
        }
        return RawOutcome::Infeasible { certificate };
    }

    // Drive leftover artificial variables out of the basis; rows where that is
    // impossible are linearly dependent on the others and get dropped.
    let mut kept: Vec<usize> = (0..m).collect();
    let mut i = 0;
    while i < tableau.rows.len() {
        if tableau.basis[i] >= NUM_TYPES {
            debug_assert!(tableau.rhs[i].is_zero());
            if let Some(q) = (0..NUM_TYPES).find(|&j| !tableau.rows[i][j].is_zero()) {
                tableau.pivot(i, q);
            } else {
                tableau.rows.remove(i);
                tableau.rhs.remove(i);
                tableau.basis.remove(i);
                kept.remove(i);
                continue;
            }
        }
        i += 1;
    }

    // Phase two: minimize the real objective from the feasible basis.
    tableau.cost = vec![Rational::zero(); ncols];
    tableau.cost[..NUM_TYPES].clone_from_slice(objective);
    tableau.objective = Rational::zero();
    for i in 0..tableau.rows.len() {
        let basic_cost = objective[tableau.basis[i]].clone();
        if basic_cost.is_zero() {
            continue;
        }
        for j in 0..ncols {
            if !tableau.rows[i][j].is_zero() {
                let delta = &basic_cost * &tableau.rows[i][j];
                tableau.cost[j] -= delta;
            }
        }
        let delta = &basic_cost * &tableau.rhs[i];
        tableau.objective += delta;
    }
    tableau.run_bland();

    let mut point = vec![Rational::zero(); NUM_TYPES];
    for (i, &b) in tableau.basis.iter().enumerate() {
        debug_assert!(b < NUM_TYPES);
        point[b] = tableau.rhs[i].clone();
    }

    // Dual multipliers: solve B'y = c_B against the original (sign-normalized)
    // kept rows, then fold the normalization back in.
    let k = tableau.basis.len();
    let mut system = vec![vec![Rational::zero(); k]; k];
    let mut target = vec![Rational::zero(); k];
    for (col, &basic) in tableau.basis.iter().enumerate() {
        for (row, &orig) in kept.iter().enumerate() {
            system[col][row] = coeffs[orig][basic].clone();
        }
        target[col] = objective[basic].clone();
    }
    let y = solve_square(system, target).expect("final basis matrix is invertible");
    let mut duals = vec![Rational::zero(); m];
    for (row, &orig) in kept.iter().enumerate() {
        duals[orig] = if signs[orig] { -y[row].clone() } else { y[row].clone() };
    }

    RawOutcome::Optimal { value: tableau.objective, point, duals }
}
