//! Exact rational linear programming: optimization with certified optima,
//! feasibility with Farkas certificates, dual vertex enumeration, and image
//! membership for singleton target vectors.
//!
//! Every answer is self-verifying. An optimum carries a primal witness and
//! dual multipliers whose inner products reproduce the value exactly; an
//! infeasibility carries multipliers exhibiting the contradiction. Calls are
//! pure and share no state, so they may run concurrently.

mod dd;
mod linalg;
mod simplex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::constraints::{build_lp, event_functional, LinearFunctional, LinearProgramSpec, NUM_TYPES};
use crate::model::{AssumptionSet, DataDistribution, Event, MassFunction, OutcomeCell, ResponseType};
use crate::rational::Rational;
use crate::Error;

pub use dd::{HRepresentation, LinearRelation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

/// Exact multipliers `y` over the spec's equality rows with `y'A <= 0`
/// componentwise and `y'b > 0`: a proof that no nonnegative solution exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub row_multipliers: Vec<Rational>,
}

impl InfeasibilityCertificate {
    /// Replays the certificate against a spec.
    pub fn verify(&self, spec: &LinearProgramSpec) -> bool {
        let rows = spec.rows();
        if rows.len() != self.row_multipliers.len() {
            return false;
        }
        for j in 0..NUM_TYPES {
            let combined: Rational = self
                .row_multipliers
                .iter()
                .zip(rows)
                .map(|(y, row)| y * &row.coefficients[j])
                .sum();
            if combined.is_positive() {
                return false;
            }
        }
        let rhs: Rational =
            self.row_multipliers.iter().zip(rows).map(|(y, row)| y * &row.rhs).sum();
        rhs.is_positive()
    }
}

/// The feasible set is empty; carries the exact certificate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("linear program is infeasible")]
pub struct Infeasible {
    pub certificate: InfeasibilityCertificate,
}

/// A certified exact optimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimumReport {
    pub value: Rational,
    pub witness: MassFunction,
    /// One multiplier per spec row. For a maximum, `A'y >= c` componentwise
    /// and `b'y = value`; for a minimum, `A'y <= c` and `b'y = value`.
    pub dual_certificate: Vec<Rational>,
}

impl OptimumReport {
    /// Replays every certificate condition: the witness satisfies the spec and
    /// attains the value, and the dual multipliers prove optimality.
    pub fn verify(
        &self,
        spec: &LinearProgramSpec,
        functional: &LinearFunctional,
        direction: Direction,
    ) -> bool {
        if !spec.is_satisfied_by(&self.witness) {
            return false;
        }
        if functional.evaluate(&self.witness) != self.value {
            return false;
        }
        let rows = spec.rows();
        if rows.len() != self.dual_certificate.len() {
            return false;
        }
        for (j, c_j) in functional.coefficients().iter().enumerate() {
            let combined: Rational = self
                .dual_certificate
                .iter()
                .zip(rows)
                .map(|(y, row)| y * &row.coefficients[j])
                .sum();
            let ok = match direction {
                Direction::Maximize => combined >= *c_j,
                Direction::Minimize => combined <= *c_j,
            };
            if !ok {
                return false;
            }
        }
        let dual_value: Rational =
            self.dual_certificate.iter().zip(rows).map(|(y, row)| y * &row.rhs).sum();
        dual_value == self.value
    }
}

/// Optimizes a linear functional over the spec's feasible polytope.
pub fn solve(
    spec: &LinearProgramSpec,
    functional: &LinearFunctional,
    direction: Direction,
) -> Result<OptimumReport, Infeasible> {
    let objective = match direction {
        Direction::Minimize => functional.clone(),
        Direction::Maximize => functional.negated(),
    };
    match simplex::solve_min(spec.rows(), objective.coefficients()) {
        simplex::RawOutcome::Infeasible { certificate } => Err(Infeasible {
            certificate: InfeasibilityCertificate { row_multipliers: certificate },
        }),
        simplex::RawOutcome::Optimal { value, point, duals } => {
            let (value, duals) = match direction {
                Direction::Minimize => (value, duals),
                Direction::Maximize => (-value, duals.into_iter().map(|y| -y).collect()),
            };
            let q: [Rational; NUM_TYPES] = point.try_into().expect("16 structural variables");
            let witness = MassFunction::new(q)
                .expect("spec feasible sets live inside the probability simplex");
            Ok(OptimumReport { value, witness, dual_certificate: duals })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Feasibility {
    Feasible(MassFunction),
    Infeasible(InfeasibilityCertificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Finds any feasible point, or proves there is none.
pub fn feasibility(spec: &LinearProgramSpec) -> Feasibility {
    match solve(spec, &LinearFunctional::zero(), Direction::Minimize) {
        Ok(report) => Feasibility::Feasible(report.witness),
        Err(infeasible) => Feasibility::Infeasible(infeasible.certificate),
    }
}

/// The inequality form `A q <= b` of a spec: each equality row splits into the
/// pair (`row <= rhs`, `-row <= -rhs`), in row order.
pub fn inequality_form(spec: &LinearProgramSpec) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let mut a = Vec::with_capacity(2 * spec.rows().len());
    let mut b = Vec::with_capacity(2 * spec.rows().len());
    for row in spec.rows() {
        a.push(row.coefficients.to_vec());
        b.push(row.rhs.clone());
        a.push(row.coefficients.iter().map(|c| -c).collect());
        b.push(-row.rhs.clone());
    }
    (a, b)
}

/// An extreme point of the dual feasible region, tagged with its objective
/// value translated to the primal scale (so it bounds the primal optimum).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualVertex {
    pub u: Vec<Rational>,
    pub objective_value: Rational,
}

impl DualVertex {
    /// Checks `u >= 0`, dual feasibility `A'u >= c~` componentwise (where `c~`
    /// is the functional for a maximum and its negation for a minimum), and
    /// the stored objective value.
    pub fn verify(
        &self,
        spec: &LinearProgramSpec,
        functional: &LinearFunctional,
        direction: Direction,
    ) -> bool {
        let (a, b) = inequality_form(spec);
        if self.u.len() != a.len() || self.u.iter().any(|x| x.is_negative()) {
            return false;
        }
        let c = match direction {
            Direction::Maximize => functional.clone(),
            Direction::Minimize => functional.negated(),
        };
        for j in 0..NUM_TYPES {
            let lhs: Rational = self.u.iter().zip(&a).map(|(u, row)| u * &row[j]).sum();
            if lhs < c.coefficients()[j] {
                return false;
            }
        }
        let raw: Rational = self.u.iter().zip(&b).map(|(u, beta)| u * beta).sum();
        let expected = match direction {
            Direction::Maximize => raw,
            Direction::Minimize => -raw,
        };
        expected == self.objective_value
    }
}

/// Enumerates all extreme points of the dual feasible region
/// `{u >= 0 : A'u >= c~}` for the inequality form of the spec. For a maximum
/// the least `objective_value` equals the primal optimum; for a minimum the
/// greatest does.
pub fn enumerate_dual_vertices(
    spec: &LinearProgramSpec,
    functional: &LinearFunctional,
    direction: Direction,
) -> Result<Vec<DualVertex>, Infeasible> {
    if let Feasibility::Infeasible(certificate) = feasibility(spec) {
        return Err(Infeasible { certificate });
    }
    let (a, b) = inequality_form(spec);
    let k = a.len();
    let c = match direction {
        Direction::Maximize => functional.clone(),
        Direction::Minimize => functional.negated(),
    };

    // Homogenize: x = (u, t) >= 0 with A'u - c t >= 0; vertices are the
    // extreme rays with t > 0.
    let mut halfspaces = Vec::with_capacity(NUM_TYPES);
    for j in 0..NUM_TYPES {
        let mut h: Vec<Rational> = a.iter().map(|row| row[j].clone()).collect();
        h.push(-c.coefficients()[j].clone());
        halfspaces.push(integerize(&h));
    }
    let rays = dd::orthant_cone_rays(k + 1, &halfspaces);

    let mut vertices = Vec::new();
    for ray in rays {
        let t = &ray[k];
        if !t.is_positive() {
            continue; // recession direction of the dual region
        }
        let t = Rational::from_integer(t.clone());
        let u: Vec<Rational> =
            ray[..k].iter().map(|x| Rational::from_integer(x.clone()) / &t).collect();
        let raw: Rational = u.iter().zip(&b).map(|(u, beta)| u * beta).sum();
        let objective_value = match direction {
            Direction::Maximize => raw,
            Direction::Minimize => -raw,
        };
        vertices.push(DualVertex { u, objective_value });
    }
    Ok(vertices)
}

/// Clears denominators and common factors, preserving direction.
fn integerize(v: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut out: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &out {
        g = g.gcd(x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in &mut out {
            *x /= &g;
        }
    }
    out
}

/// Outcome of an image-membership query.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Membership {
    /// A mass function reproducing the data and the singleton targets.
    Member(MassFunction),
    /// No such mass function; carries a separating certificate.
    NotInImage(InfeasibilityCertificate),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// Decides whether a candidate assignment of the four singleton-event
/// probabilities (`targets` indexed by outcome-cell order) is attainable
/// jointly with the data: exact feasibility over convex-combination weights,
/// which by additivity covers every event at once.
pub fn image_membership(
    p: &DataDistribution,
    assumptions: AssumptionSet,
    targets: &[Rational; 4],
) -> Result<Membership, Error> {
    if let Some(bad) = targets.iter().find(|t| t.is_negative()) {
        return Err(Error::MalformedTargets(format!(
            "target {} is negative",
            crate::rational::format_rational(bad)
        )));
    }
    let total: Rational = targets.iter().sum();
    if !total.is_one() {
        return Err(Error::MalformedTargets(format!(
            "targets sum to {}, not one",
            crate::rational::format_rational(&total)
        )));
    }
    let mut spec = build_lp(p, assumptions);
    for cell in OutcomeCell::all() {
        spec = spec.with_row(
            &event_functional(Event::singleton(cell)),
            targets[cell.index()].clone(),
        );
    }
    Ok(match feasibility(&spec) {
        Feasibility::Feasible(q) => Membership::Member(q),
        Feasibility::Infeasible(certificate) => Membership::NotInImage(certificate),
    })
}

/// Coordinate labels for [`image_h_representation`], in order: the eight data
/// cells then the four singleton probabilities.
pub fn image_coordinate_labels() -> Vec<String> {
    let mut labels = Vec::with_capacity(12);
    for z in [false, true] {
        for d in [false, true] {
            for y in [false, true] {
                labels.push(format!("P[{},{}|{}]", u8::from(y), u8::from(d), u8::from(z)));
            }
        }
    }
    for cell in OutcomeCell::all() {
        labels.push(format!("mu[{cell}]"));
    }
    labels
}

/// The H-representation of the set of jointly attainable
/// (data, singleton-probability) vectors: the convex hull of the columns
/// generated by the admissible unit point masses. Purely for inspection; the
/// membership decision itself goes through the feasibility program.
pub fn image_h_representation(assumptions: AssumptionSet) -> HRepresentation {
    let points: Vec<Vec<Rational>> = ResponseType::all()
        .filter(|w| {
            assumptions == AssumptionSet::ExogeneityOnly || !w.is_defier()
        })
        .map(image_point)
        .collect();
    dd::hull_h_representation(&points)
}

/// The image coordinates of a unit mass on `w`: its observed cell indicators
/// in each instrument arm and its outcome-cell indicator.
fn image_point(w: ResponseType) -> Vec<Rational> {
    let mut x = vec![Rational::zero(); 12];
    for (offset, z) in [(0usize, false), (4usize, true)] {
        let (y, d) = w.observed(z);
        x[offset + 2 * usize::from(d) + usize::from(y)] = Rational::one();
    }
    x[8 + w.outcome_cell().index()] = Rational::one();
    x
}

/// Stacks a data distribution and singleton targets into image coordinates.
pub fn image_coordinates(p: &DataDistribution, targets: &[Rational; 4]) -> Vec<Rational> {
    let mut x = Vec::with_capacity(12);
    for z in [false, true] {
        for d in [false, true] {
            for y in [false, true] {
                x.push(p.p(y, d, z).clone());
            }
        }
    }
    x.extend(targets.iter().cloned());
    x
}
