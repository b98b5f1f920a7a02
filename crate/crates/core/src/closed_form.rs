//! Closed-form sharp bounds on the probability of every outcome event, with
//! and without the no-defier restriction.
//!
//! The upper bound depends only on the shape of the event: empty, singleton,
//! a pair fixing `y0` or fixing `y1`, one of the two diagonal pairs, a triple,
//! or everything. Lower bounds come from complements, `L(A) = 1 - U(A^c)`.
//! The two assumption sets differ in exactly one place: the extra
//! `min{P[i,0|1], P[j,1|0]}` slack term inside the triple bound, which the
//! no-defier restriction removes. These formulas are sharp only when the data
//! are consistent with the no-defier model, so by default every entry point
//! checks that condition and refuses otherwise; the permissive variants
//! evaluate regardless, for diagnostics.

use num_traits::One;

use crate::model::{AssumptionSet, DataDistribution, Event, Interval, OutcomeCell};
use crate::rational::{format_rational, Rational};
use crate::Error;

/// How an event sits inside the 2x2 grid of outcome pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EventShape {
    Empty,
    /// `{(i,j)}`
    Singleton { i: bool, j: bool },
    /// `{(i,0),(i,1)}`: fixes the untreated outcome.
    FixedY0 { i: bool },
    /// `{(0,i),(1,i)}`: fixes the treated outcome.
    FixedY1 { i: bool },
    /// `{(0,i),(1,1-i)}`: one of the two diagonals.
    Diagonal { i: bool },
    /// `{(i,j),(i,1-j),(1-i,j)}`: everything but the cell `(1-i,1-j)`.
    Triple { i: bool, j: bool },
    Full,
}

/// Fixed lookup of the 16 masks; the mask bit for cell `(y0,y1)` is
/// `2*y0 + y1`, so each arm below names its cells explicitly.
fn classify(event: Event) -> EventShape {
    match event.mask() {
        0b0000 => EventShape::Empty,
        0b0001 => EventShape::Singleton { i: false, j: false },
        0b0010 => EventShape::Singleton { i: false, j: true },
        0b0100 => EventShape::Singleton { i: true, j: false },
        0b1000 => EventShape::Singleton { i: true, j: true },
        0b0011 => EventShape::FixedY0 { i: false },
        0b1100 => EventShape::FixedY0 { i: true },
        0b0101 => EventShape::FixedY1 { i: false },
        0b1010 => EventShape::FixedY1 { i: true },
        0b1001 => EventShape::Diagonal { i: false },
        0b0110 => EventShape::Diagonal { i: true },
        // Triples are keyed by their missing cell (1-i, 1-j).
        0b0111 => EventShape::Triple { i: false, j: false }, // missing (1,1)
        0b1011 => EventShape::Triple { i: false, j: true },  // missing (1,0)
        0b1101 => EventShape::Triple { i: true, j: false },  // missing (0,1)
        0b1110 => EventShape::Triple { i: true, j: true },   // missing (0,0)
        0b1111 => EventShape::Full,
        _ => unreachable!("event masks are four bits"),
    }
}

fn check_consistency(p: &DataDistribution) -> Result<(), Error> {
    if p.is_em_consistent() {
        Ok(())
    } else {
        let margins = p.monotonicity_margins();
        Err(Error::ConsistencyViolated {
            margins: std::array::from_fn(|k| format_rational(&margins[k])),
        })
    }
}

/// Sharp upper bound on `Prob{(Y0,Y1) in event}`; errors unless the data pass
/// the consistency condition.
pub fn upper_bound(
    p: &DataDistribution,
    event: Event,
    assumptions: AssumptionSet,
) -> Result<Rational, Error> {
    check_consistency(p)?;
    Ok(upper_bound_permissive(p, event, assumptions))
}

/// Sharp lower bound, `1 - U(complement)`; same consistency requirement.
pub fn lower_bound(
    p: &DataDistribution,
    event: Event,
    assumptions: AssumptionSet,
) -> Result<Rational, Error> {
    check_consistency(p)?;
    Ok(lower_bound_permissive(p, event, assumptions))
}

/// The upper-bound formula with no consistency gate. Outside the consistent
/// region the value carries no sharpness guarantee.
pub fn upper_bound_permissive(
    p: &DataDistribution,
    event: Event,
    assumptions: AssumptionSet,
) -> Rational {
    let one = Rational::one;
    match classify(event) {
        EventShape::Empty => Rational::from_integer(0.into()),
        EventShape::Singleton { i, j } => {
            let at_z0 = p.p(i, false, false) + p.p(j, true, false);
            let at_z1 = p.p(i, false, true) + p.p(j, true, true);
            at_z0.min(at_z1)
        }
        EventShape::FixedY0 { i } => {
            p.p(i, false, false) + p.p(false, true, false) + p.p(true, true, false)
        }
        EventShape::FixedY1 { i } => {
            p.p(i, true, true) + p.p(false, false, true) + p.p(true, false, true)
        }
        EventShape::Diagonal { i } => {
            let first = p.p(false, false, false)
                + p.p(true, false, true)
                + p.p(i, true, false)
                + p.p(!i, true, true);
            let second = p.p(false, false, true)
                + p.p(true, false, false)
                + p.p(i, true, true)
                + p.p(!i, true, false);
            one().min(first).min(second)
        }
        EventShape::Triple { i, j } => {
            let base = p.p(i, false, false)
                + p.p(!i, false, true)
                + p.p(!j, true, false)
                + p.p(j, true, true);
            match assumptions {
                AssumptionSet::ExogeneityOnly => {
                    let slack = p.p(i, false, true).min(p.p(j, true, false)).clone();
                    one().min(base + slack)
                }
                AssumptionSet::ExogeneityPlusMonotonicity => one().min(base),
            }
        }
        EventShape::Full => Rational::one(),
    }
}

/// The lower-bound formula with no consistency gate.
pub fn lower_bound_permissive(
    p: &DataDistribution,
    event: Event,
    assumptions: AssumptionSet,
) -> Rational {
    Rational::one() - upper_bound_permissive(p, event.complement(), assumptions)
}

/// Identified intervals for one event under both assumption sets, with the
/// strict-containment flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventBounds {
    pub event: Event,
    pub exogeneity_only: Interval,
    pub with_monotonicity: Interval,
    /// True when the monotonicity interval is a proper subset.
    pub strict: bool,
}

/// Identified intervals for all 16 events under both assumption sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsTable {
    entries: Vec<EventBounds>,
}

impl BoundsTable {
    pub fn entries(&self) -> &[EventBounds] {
        &self.entries
    }

    pub fn get(&self, event: Event) -> &EventBounds {
        &self.entries[event.mask() as usize]
    }

    pub fn interval(&self, event: Event, assumptions: AssumptionSet) -> &Interval {
        let entry = self.get(event);
        match assumptions {
            AssumptionSet::ExogeneityOnly => &entry.exogeneity_only,
            AssumptionSet::ExogeneityPlusMonotonicity => &entry.with_monotonicity,
        }
    }

    /// Whether any event's monotonicity interval is strictly smaller.
    pub fn any_strict(&self) -> bool {
        self.entries.iter().any(|e| e.strict)
    }

    pub fn from_entries(entries: Vec<EventBounds>) -> Result<Self, Error> {
        if entries.len() != 16
            || entries.iter().enumerate().any(|(k, e)| e.event.mask() as usize != k)
        {
            return Err(Error::MalformedInput(
                "bounds table must cover the 16 events in mask order".into(),
            ));
        }
        Ok(BoundsTable { entries })
    }
}

/// Computes the full table; errors unless the data pass the consistency
/// condition.
pub fn bounds_table(p: &DataDistribution) -> Result<BoundsTable, Error> {
    check_consistency(p)?;
    let entries = Event::all()
        .map(|event| {
            let e = Interval::new(
                lower_bound_permissive(p, event, AssumptionSet::ExogeneityOnly),
                upper_bound_permissive(p, event, AssumptionSet::ExogeneityOnly),
            )?;
            let em = Interval::new(
                lower_bound_permissive(p, event, AssumptionSet::ExogeneityPlusMonotonicity),
                upper_bound_permissive(p, event, AssumptionSet::ExogeneityPlusMonotonicity),
            )?;
            let strict = em.strictly_inside(&e);
            Ok(EventBounds { event, exogeneity_only: e, with_monotonicity: em, strict })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(BoundsTable { entries })
}

/// Evaluates the table without the consistency gate; intervals may be empty
/// or inverted and are reported as-is.
pub fn bounds_table_permissive(p: &DataDistribution) -> BoundsTable {
    let entries = Event::all()
        .map(|event| {
            let e = Interval::new_unchecked(
                lower_bound_permissive(p, event, AssumptionSet::ExogeneityOnly),
                upper_bound_permissive(p, event, AssumptionSet::ExogeneityOnly),
            );
            let em = Interval::new_unchecked(
                lower_bound_permissive(p, event, AssumptionSet::ExogeneityPlusMonotonicity),
                upper_bound_permissive(p, event, AssumptionSet::ExogeneityPlusMonotonicity),
            );
            let strict = em.strictly_inside(&e);
            EventBounds { event, exogeneity_only: e, with_monotonicity: em, strict }
        })
        .collect();
    BoundsTable { entries }
}

/// The event whose probability is `Prob{Y1 > Y0}`, the proportion who
/// strictly benefit from treatment.
pub fn strict_benefit_event() -> Event {
    Event::singleton(OutcomeCell::new(false, true))
}

/// The event whose probability is `Prob{Y0 > Y1}`, the proportion who
/// strictly lose from treatment.
pub fn strict_loss_event() -> Event {
    Event::singleton(OutcomeCell::new(true, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{push_forward, MassFunction, ResponseType};
    use crate::rational::ratio;
    use AssumptionSet::{ExogeneityOnly as E, ExogeneityPlusMonotonicity as EM};

    fn p_star() -> DataDistribution {
        DataDistribution::from_json_str(
            r#"{"z0": {"y0d0": "1/2", "y1d0": "1/5", "y0d1": "1/10", "y1d1": "1/5"},
                "z1": {"y0d0": "3/10", "y1d0": "1/10", "y0d1": "1/5", "y1d1": "2/5"}}"#,
        )
        .unwrap()
    }

    /// Same cell order as `p_star`, but with all four triple base sums equal
    /// to one: two-sided noncompliance without identifying content.
    fn p_diamond() -> DataDistribution {
        DataDistribution::from_json_str(
            r#"{"z0": {"y0d0": "2/5", "y1d0": "3/10", "y0d1": "1/10", "y1d1": "1/5"},
                "z1": {"y0d0": "1/5", "y1d0": "1/10", "y0d1": "3/10", "y1d1": "2/5"}}"#,
        )
        .unwrap()
    }

    fn p_perfect_compliance() -> DataDistribution {
        DataDistribution::from_json_str(
            r#"{"z0": {"y0d0": "1/2", "y1d0": "1/2", "y0d1": "0", "y1d1": "0"},
                "z1": {"y0d0": "0", "y1d0": "0", "y0d1": "1/2", "y1d1": "1/2"}}"#,
        )
        .unwrap()
    }

    #[test]
    fn trivial_events_have_trivial_bounds() {
        let p = p_star();
        for assumptions in AssumptionSet::BOTH {
            assert_eq!(upper_bound(&p, Event::EMPTY, assumptions).unwrap(), ratio(0, 1));
            assert_eq!(upper_bound(&p, Event::FULL, assumptions).unwrap(), ratio(1, 1));
            assert_eq!(lower_bound(&p, Event::FULL, assumptions).unwrap(), ratio(1, 1));
            assert_eq!(lower_bound(&p, Event::EMPTY, assumptions).unwrap(), ratio(0, 1));
        }
    }

    #[test]
    fn singleton_bound_on_the_running_example() {
        let p = p_star();
        let a = Event::singleton(OutcomeCell::new(false, false));
        // min{1/2 + 1/10, 3/10 + 1/5} = 1/2 under either assumption set.
        for assumptions in AssumptionSet::BOTH {
            assert_eq!(upper_bound(&p, a, assumptions).unwrap(), ratio(1, 2));
        }
    }

    #[test]
    fn triple_bound_separates_the_assumption_sets() {
        let p = p_star();
        // {(1,0),(1,1),(0,0)}: the triple missing (0,1).
        let triple = Event::from_cells([
            OutcomeCell::new(true, false),
            OutcomeCell::new(true, true),
            OutcomeCell::new(false, false),
        ]);
        assert_eq!(upper_bound(&p, triple, EM).unwrap(), ratio(9, 10));
        assert_eq!(upper_bound(&p, triple, E).unwrap(), ratio(1, 1));
    }

    #[test]
    fn strict_benefit_lower_bounds_on_the_running_example() {
        let p = p_star();
        let benefit = strict_benefit_event();
        assert_eq!(lower_bound(&p, benefit, EM).unwrap(), ratio(1, 10));
        assert_eq!(lower_bound(&p, benefit, E).unwrap(), ratio(0, 1));
    }

    #[test]
    fn perfect_compliance_erases_the_contrast() {
        let table = bounds_table(&p_perfect_compliance()).unwrap();
        for entry in table.entries() {
            assert_eq!(entry.exogeneity_only, entry.with_monotonicity);
            assert!(!entry.strict);
        }
    }

    #[test]
    fn strict_flags_on_the_running_example() {
        let table = bounds_table(&p_star()).unwrap();
        let flagged: Vec<Event> =
            table.entries().iter().filter(|e| e.strict).map(|e| e.event).collect();
        let triple = Event::from_cells([
            OutcomeCell::new(false, false),
            OutcomeCell::new(true, false),
            OutcomeCell::new(true, true),
        ]);
        assert_eq!(flagged, vec![strict_benefit_event(), triple]);

        // The flagged triple differs in the upper endpoint, the flagged
        // singleton in the lower endpoint.
        let t = table.get(triple);
        assert!(t.with_monotonicity.hi() < t.exogeneity_only.hi());
        assert_eq!(t.with_monotonicity.lo(), t.exogeneity_only.lo());
        let s = table.get(strict_benefit_event());
        assert!(s.with_monotonicity.lo() > s.exogeneity_only.lo());
        assert_eq!(s.with_monotonicity.hi(), s.exogeneity_only.hi());
    }

    #[test]
    fn no_strict_flags_despite_two_sided_noncompliance() {
        let p = p_diamond();
        assert!(p.two_sided_noncompliance());
        let table = bounds_table(&p).unwrap();
        assert!(!table.any_strict());
    }

    #[test]
    fn consistency_gate_refuses_and_permissive_evaluates() {
        // Push-forward of a defier point mass: E-feasible, EM-inconsistent.
        let q = MassFunction::point_mass(ResponseType::new(false, true, true, false));
        let p = push_forward(&q);
        assert!(matches!(
            upper_bound(&p, Event::FULL, EM),
            Err(Error::ConsistencyViolated { .. })
        ));
        assert!(matches!(bounds_table(&p), Err(Error::ConsistencyViolated { .. })));
        assert_eq!(upper_bound_permissive(&p, Event::FULL, EM), ratio(1, 1));
    }

    #[test]
    fn complement_duality_nesting_monotonicity_subadditivity() {
        for p in [p_star(), p_diamond(), p_perfect_compliance()] {
            for assumptions in AssumptionSet::BOTH {
                for a in Event::all() {
                    let u = upper_bound(&p, a, assumptions).unwrap();
                    let l = lower_bound(&p, a, assumptions).unwrap();
                    // L(A) + U(A^c) = 1
                    let u_comp = upper_bound(&p, a.complement(), assumptions).unwrap();
                    assert_eq!(&l + &u_comp, ratio(1, 1));
                    assert!(l <= u);
                    for b in Event::all() {
                        if a.is_subset_of(b) {
                            let ub = upper_bound(&p, b, assumptions).unwrap();
                            let lb = lower_bound(&p, b, assumptions).unwrap();
                            assert!(u <= ub);
                            assert!(l <= lb);
                        }
                        if a.is_disjoint_from(b) {
                            let union = a.union(b);
                            let uu = upper_bound(&p, union, assumptions).unwrap();
                            let lu = lower_bound(&p, union, assumptions).unwrap();
                            assert!(uu <= &u + upper_bound(&p, b, assumptions).unwrap());
                            assert!(lu >= &l + lower_bound(&p, b, assumptions).unwrap());
                        }
                    }
                }
            }
            // Nesting and strictness localization.
            for a in Event::all() {
                let ue = upper_bound(&p, a, E).unwrap();
                let uem = upper_bound(&p, a, EM).unwrap();
                let le = lower_bound(&p, a, E).unwrap();
                let lem = lower_bound(&p, a, EM).unwrap();
                assert!(uem <= ue);
                assert!(lem >= le);
                if uem != ue {
                    assert_eq!(a.len(), 3, "upper bounds may differ only on triples");
                }
                if lem != le {
                    assert_eq!(a.len(), 1, "lower bounds may differ only on singletons");
                }
            }
        }
    }
}
