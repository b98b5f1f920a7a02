//! Linear-program description of the admissible mass functions and the linear
//! functionals evaluated on them.
//!
//! The feasible set is always a subset of the probability simplex over the 16
//! response types: every spec carries the sum-to-one row and nonnegativity of
//! all variables. Under exogeneity the eight observed cell probabilities pin
//! the corresponding type sums; under exogeneity plus monotonicity one more
//! row forces the total defier mass to zero. Redundant rows are kept as
//! written; rank handling is the engine's job.

use num_traits::{One, Zero};

use crate::model::{
    response_types_for_cell, AssumptionSet, DataDistribution, Event, MassFunction, ResponseType,
};
use crate::rational::Rational;

pub const NUM_TYPES: usize = 16;

/// A linear functional of the mass function: 16 coefficients in canonical
/// response-type order, evaluated as the exact inner product with `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFunctional {
    coefficients: [Rational; NUM_TYPES],
}

impl LinearFunctional {
    pub fn zero() -> Self {
        LinearFunctional { coefficients: std::array::from_fn(|_| Rational::zero()) }
    }

    pub fn from_fn(mut f: impl FnMut(ResponseType) -> Rational) -> Self {
        LinearFunctional { coefficients: std::array::from_fn(|i| f(ResponseType::from_index(i))) }
    }

    pub fn coefficients(&self) -> &[Rational; NUM_TYPES] {
        &self.coefficients
    }

    pub fn coefficient(&self, w: ResponseType) -> &Rational {
        &self.coefficients[w.index()]
    }

    pub fn evaluate(&self, q: &MassFunction) -> Rational {
        self.coefficients.iter().zip(q.values()).map(|(c, v)| c * v).sum()
    }

    /// Componentwise difference, used to assemble contrasts of functionals.
    pub fn minus(&self, other: &LinearFunctional) -> LinearFunctional {
        LinearFunctional {
            coefficients: std::array::from_fn(|i| {
                &self.coefficients[i] - &other.coefficients[i]
            }),
        }
    }

    pub fn plus(&self, other: &LinearFunctional) -> LinearFunctional {
        LinearFunctional {
            coefficients: std::array::from_fn(|i| {
                &self.coefficients[i] + &other.coefficients[i]
            }),
        }
    }

    pub fn negated(&self) -> LinearFunctional {
        LinearFunctional { coefficients: std::array::from_fn(|i| -&self.coefficients[i]) }
    }
}

/// Indicator of the event: coefficient 1 on every type whose outcome pair lies
/// in `event`, 0 elsewhere. Evaluates to `Prob{(Y0,Y1) in event}`.
pub fn event_functional(event: Event) -> LinearFunctional {
    LinearFunctional::from_fn(|w| {
        if event.contains(w.outcome_cell()) {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// `Prob{Y_d = 1}`: coefficient 1 on the eight types with `y_d = 1`.
pub fn marginal_functional(d: bool) -> LinearFunctional {
    LinearFunctional::from_fn(|w| {
        if w.outcome(d) {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// Average treatment effect `E[Y1 - Y0]` as a functional of the mass function.
pub fn ate_functional() -> LinearFunctional {
    marginal_functional(true).minus(&marginal_functional(false))
}

/// One equality row `coefficients . q = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualityRow {
    pub coefficients: [Rational; NUM_TYPES],
    pub rhs: Rational,
}

/// Equality rows over 16 nonnegative variables. The variable upper bound of
/// one is implied by the sum-to-one row and nonnegativity, so it is never
/// materialized as extra rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgramSpec {
    rows: Vec<EqualityRow>,
}

impl LinearProgramSpec {
    /// Just the probability simplex: the sum-to-one row and nonnegativity.
    pub fn simplex_only() -> Self {
        LinearProgramSpec {
            rows: vec![EqualityRow {
                coefficients: std::array::from_fn(|_| Rational::one()),
                rhs: Rational::one(),
            }],
        }
    }

    pub fn rows(&self) -> &[EqualityRow] {
        &self.rows
    }

    /// Returns a copy with one more equality row `functional . q = rhs`.
    pub fn with_row(&self, functional: &LinearFunctional, rhs: Rational) -> Self {
        let mut rows = self.rows.clone();
        rows.push(EqualityRow { coefficients: functional.coefficients().clone(), rhs });
        LinearProgramSpec { rows }
    }

    /// Whether `q` satisfies every equality row exactly.
    pub fn is_satisfied_by(&self, q: &MassFunction) -> bool {
        self.rows.iter().all(|row| {
            let lhs: Rational =
                row.coefficients.iter().zip(q.values()).map(|(c, v)| c * v).sum();
            lhs == row.rhs
        })
    }
}

/// Assembles the feasible-set description for a data distribution under the
/// chosen assumption set: eight data rows, the sum-to-one row, and (under
/// monotonicity) the zero-defier-mass row.
pub fn build_lp(p: &DataDistribution, assumptions: AssumptionSet) -> LinearProgramSpec {
    let mut rows = Vec::with_capacity(10);
    for z in [false, true] {
        for d in [false, true] {
            for y in [false, true] {
                let mut coefficients: [Rational; NUM_TYPES] =
                    std::array::from_fn(|_| Rational::zero());
                for w in response_types_for_cell(y, d, z) {
                    coefficients[w.index()] = Rational::one();
                }
                rows.push(EqualityRow { coefficients, rhs: p.p(y, d, z).clone() });
            }
        }
    }
    rows.push(EqualityRow {
        coefficients: std::array::from_fn(|_| Rational::one()),
        rhs: Rational::one(),
    });
    if assumptions == AssumptionSet::ExogeneityPlusMonotonicity {
        let mut coefficients: [Rational; NUM_TYPES] = std::array::from_fn(|_| Rational::zero());
        for w in ResponseType::all().filter(|w| w.is_defier()) {
            coefficients[w.index()] = Rational::one();
        }
        rows.push(EqualityRow { coefficients, rhs: Rational::zero() });
    }
    LinearProgramSpec { rows }
}
