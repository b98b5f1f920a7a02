//! High-level reports: consistency triage, the identifying-content decision
//! with witnesses, sharpness witnesses for any attainable event probability,
//! the side-by-side bounds comparison, and a seeded sampler of consistent
//! data distributions.

use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::closed_form::{self, BoundsTable};
use crate::constraints::{build_lp, event_functional};
use crate::lp::{self, Feasibility};
use crate::model::{
    push_forward, AssumptionSet, DataDistribution, Event, MassFunction, ResponseType,
};
use crate::rational::{format_rational, Rational};
use crate::Error;

/// Diagnostic triage of a data distribution against the model assumptions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    /// `P[0,1|1]-P[0,1|0]`, `P[1,1|1]-P[1,1|0]`, `P[0,0|0]-P[0,0|1]`,
    /// `P[1,0|0]-P[1,0|1]`.
    pub condition_margins: [Rational; 4],
    /// All four margins nonnegative: the no-defier model fits the data.
    pub em_consistent: bool,
    /// The exogeneity-only model fits the data (decided by the LP engine).
    pub e_feasible: bool,
    pub two_sided_noncompliance: bool,
}

pub fn consistency_report(p: &DataDistribution) -> ConsistencyReport {
    let condition_margins = p.monotonicity_margins();
    let em_consistent = condition_margins.iter().all(|m| !m.is_negative());
    let e_feasible =
        lp::feasibility(&build_lp(p, AssumptionSet::ExogeneityOnly)).is_feasible();
    ConsistencyReport {
        condition_margins,
        em_consistent,
        e_feasible,
        two_sided_noncompliance: p.two_sided_noncompliance(),
    }
}

/// One qualifying `(i, j)` pair: noncompliance mass in both arms for this pair
/// and headroom below one in the associated triple bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentWitness {
    pub i: bool,
    pub j: bool,
    /// `min{P[i,0|1], P[j,1|0]}`; must be positive.
    pub noncompliance_mass: Rational,
    /// `P[i,0|0] + P[1-i,0|1] + P[1-j,1|0] + P[j,1|1]`; must be below one.
    pub triple_mass: Rational,
}

/// Whether adding instrument monotonicity strictly shrinks the identified set
/// for the joint distribution of potential outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentReport {
    pub verdict: bool,
    pub witnesses: Vec<ContentWitness>,
}

/// Decides identifying content by the exact pair conditions; requires the
/// data to pass the consistency condition first.
pub fn identifying_content(p: &DataDistribution) -> Result<ContentReport, Error> {
    ensure_consistent(p)?;
    let mut witnesses = Vec::new();
    for i in [false, true] {
        for j in [false, true] {
            let noncompliance_mass = p.p(i, false, true).min(p.p(j, true, false)).clone();
            let triple_mass = p.p(i, false, false)
                + p.p(!i, false, true)
                + p.p(!j, true, false)
                + p.p(j, true, true);
            if noncompliance_mass.is_positive() && triple_mass < Rational::one() {
                witnesses.push(ContentWitness { i, j, noncompliance_mass, triple_mass });
            }
        }
    }
    Ok(ContentReport { verdict: !witnesses.is_empty(), witnesses })
}

/// A mass function in the chosen model class that reproduces the data and
/// gives the event probability exactly `target`. Implemented by pinning the
/// event mass with one extra equality row and asking for feasibility, so the
/// returned witness is certified for any rational target in the identified
/// interval, endpoints included.
pub fn sharpness_witness(
    p: &DataDistribution,
    event: Event,
    assumptions: AssumptionSet,
    target: &Rational,
) -> Result<MassFunction, Error> {
    let lo = closed_form::lower_bound(p, event, assumptions)?;
    let hi = closed_form::upper_bound(p, event, assumptions)?;
    if *target < lo || *target > hi {
        return Err(Error::TargetOutsideInterval {
            target: format_rational(target),
            lo: format_rational(&lo),
            hi: format_rational(&hi),
        });
    }
    let spec = build_lp(p, assumptions).with_row(&event_functional(event), target.clone());
    match lp::feasibility(&spec) {
        Feasibility::Feasible(q) => Ok(q),
        Feasibility::Infeasible(certificate) => Err(lp::Infeasible { certificate }.into()),
    }
}

/// Full bounds table under both assumption sets with strict-containment
/// flags; the overall verdict (any strict flag) agrees with
/// [`identifying_content`].
pub fn compare_assumption_sets(p: &DataDistribution) -> Result<BoundsTable, Error> {
    ensure_consistent(p)?;
    closed_form::bounds_table(p)
}

fn ensure_consistent(p: &DataDistribution) -> Result<(), Error> {
    if p.is_em_consistent() {
        Ok(())
    } else {
        let margins = p.monotonicity_margins();
        Err(Error::ConsistencyViolated {
            margins: std::array::from_fn(|k| format_rational(&margins[k])),
        })
    }
}

/// Draws a deterministic pseudo-random data distribution together with a mass
/// function generating it. The mass function is a uniform random integer
/// composition of `denominator` over the 16 response types (over the 12
/// non-defier types for the monotone class, making the output pass the
/// consistency condition by construction), so every probability is an exact
/// fraction over `denominator`. Identical arguments give identical output.
pub fn sample_consistent(
    seed: u64,
    denominator: u64,
    class: AssumptionSet,
) -> (DataDistribution, MassFunction) {
    assert!(denominator >= 1, "denominator must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let admissible: Vec<ResponseType> = ResponseType::all()
        .filter(|w| class == AssumptionSet::ExogeneityOnly || !w.is_defier())
        .collect();
    let parts = composition(&mut rng, denominator, admissible.len());
    let mut q: [Rational; 16] = std::array::from_fn(|_| Rational::zero());
    for (w, part) in admissible.iter().zip(parts) {
        q[w.index()] = Rational::new(part.into(), denominator.into());
    }
    let q = MassFunction::new(q).expect("composition parts sum to the denominator");
    (push_forward(&q), q)
}

/// Uniform random weak composition of `total` into `bins` parts
/// (stars and bars: choose `bins - 1` separators among `total + bins - 1`
/// slots uniformly at random; the star runs between separators are the parts).
fn composition(rng: &mut ChaCha8Rng, total: u64, bins: usize) -> Vec<u64> {
    debug_assert!(bins >= 1);
    let slots = (total + bins as u64 - 1) as usize;
    let mut bars: Vec<u64> = rand::seq::index::sample(rng, slots, bins - 1)
        .into_iter()
        .map(|i| i as u64)
        .collect();
    bars.sort_unstable();
    let mut parts = Vec::with_capacity(bins);
    let mut stars_seen = 0u64;
    for (k, bar) in bars.iter().enumerate() {
        let stars_before_bar = bar - k as u64;
        parts.push(stars_before_bar - stars_seen);
        stars_seen = stars_before_bar;
    }
    parts.push(total - stars_seen);
    parts
}
