//! Engine-level checks of the exact LP machinery against an independent
//! brute-force oracle, plus certificate replay for every answer.

use ivbounds::closed_form::strict_benefit_event;
use ivbounds::constraints::{build_lp, event_functional, LinearFunctional, LinearProgramSpec};
use ivbounds::lp::{
    enumerate_dual_vertices, feasibility, image_coordinates, image_h_representation,
    image_membership, inequality_form, solve, Direction, Feasibility, Membership,
};
use ivbounds::rational::{ratio, Rational};
use ivbounds::{
    push_forward, AssumptionSet, DataDistribution, Event, MassFunction, OutcomeCell, ResponseType,
};
use num_traits::{One, Zero};

mod support;
use support::brute;

use AssumptionSet::{ExogeneityOnly as E, ExogeneityPlusMonotonicity as EM};
use Direction::{Maximize, Minimize};

fn p_star() -> DataDistribution {
    DataDistribution::from_json_str(
        r#"{"z0": {"y0d0": "1/2", "y1d0": "1/5", "y0d1": "1/10", "y1d1": "1/5"},
            "z1": {"y0d0": "3/10", "y1d0": "1/10", "y0d1": "1/5", "y1d1": "2/5"}}"#,
    )
    .unwrap()
}

/// Two observed cells on disjoint response-type sets demand total mass 6/5.
fn p_bad() -> DataDistribution {
    DataDistribution::from_json_str(
        r#"{"z0": {"y0d0": "3/5", "y1d0": "0", "y0d1": "0", "y1d1": "2/5"},
            "z1": {"y0d0": "0", "y1d0": "3/5", "y0d1": "2/5", "y1d1": "0"}}"#,
    )
    .unwrap()
}

fn checked_solve(
    spec: &LinearProgramSpec,
    functional: &LinearFunctional,
    direction: Direction,
) -> Rational {
    let report = solve(spec, functional, direction).expect("feasible");
    assert!(report.verify(spec, functional, direction), "certificate replay failed");
    report.value
}

#[test]
fn unconstrained_simplex_maximum_is_a_point_mass() {
    let spec = LinearProgramSpec::simplex_only();
    let f = event_functional(Event::singleton(OutcomeCell::new(false, true)));
    let report = solve(&spec, &f, Maximize).unwrap();
    assert!(report.value.is_one());
    assert!(report.verify(&spec, &f, Maximize));
    let unit_types: Vec<ResponseType> =
        ResponseType::all().filter(|w| report.witness.q(*w).is_one()).collect();
    assert_eq!(unit_types.len(), 1);
    let w = unit_types[0];
    assert!(!w.y0 && w.y1, "mass must sit on a type with (y0,y1) = (0,1)");
}

#[test]
fn running_example_singleton_maximum_matches_oracle_and_formula() {
    let p = p_star();
    let spec = build_lp(&p, E);
    let f = event_functional(Event::singleton(OutcomeCell::new(false, false)));
    let value = checked_solve(&spec, &f, Maximize);
    // min{P[0,0|0]+P[0,1|0], P[0,0|1]+P[0,1|1]} = min{3/5, 1/2}
    assert_eq!(value, ratio(1, 2));
    let (lo, hi) = brute::optimum_range(&spec, &f).expect("feasible");
    assert_eq!(hi, value);
    assert_eq!(lo, checked_solve(&spec, &f, Minimize));
}

#[test]
fn running_example_triple_bounds_match_oracle_under_both_models() {
    let p = p_star();
    let triple = Event::from_cells([
        OutcomeCell::new(false, false),
        OutcomeCell::new(true, false),
        OutcomeCell::new(true, true),
    ]);
    let f = event_functional(triple);
    let em_value = checked_solve(&build_lp(&p, EM), &f, Maximize);
    assert_eq!(em_value, ratio(9, 10));
    let e_value = checked_solve(&build_lp(&p, E), &f, Maximize);
    assert_eq!(e_value, ratio(1, 1));
    let (_, hi) = brute::optimum_range(&build_lp(&p, EM), &f).expect("feasible");
    assert_eq!(hi, em_value);
}

#[test]
fn strict_benefit_lower_bounds_match_oracle() {
    let p = p_star();
    let f = event_functional(strict_benefit_event());
    let em_value = checked_solve(&build_lp(&p, EM), &f, Minimize);
    assert_eq!(em_value, ratio(1, 10));
    let e_value = checked_solve(&build_lp(&p, E), &f, Minimize);
    assert_eq!(e_value, ratio(0, 1));
    let (lo, _) = brute::optimum_range(&build_lp(&p, EM), &f).expect("feasible");
    assert_eq!(lo, em_value);
}

#[test]
fn contradictory_cells_are_infeasible_with_a_replayable_certificate() {
    let spec = build_lp(&p_bad(), E);
    match feasibility(&spec) {
        Feasibility::Infeasible(certificate) => assert!(certificate.verify(&spec)),
        Feasibility::Feasible(_) => panic!("p_bad must be infeasible"),
    }
    let err = solve(&spec, &event_functional(Event::FULL), Maximize).unwrap_err();
    assert!(err.certificate.verify(&spec));
    assert!(brute::optimum_range(&spec, &event_functional(Event::FULL)).is_none());
}

#[test]
fn feasibility_returns_valid_witnesses() {
    let p = push_forward(&MassFunction::uniform());
    let spec = build_lp(&p, E);
    match feasibility(&spec) {
        Feasibility::Feasible(q) => assert!(spec.is_satisfied_by(&q)),
        Feasibility::Infeasible(_) => panic!("uniform push-forward is feasible"),
    }
    let em = build_lp(&p_star(), EM);
    match feasibility(&em) {
        Feasibility::Feasible(q) => {
            assert!(em.is_satisfied_by(&q));
            assert!(q.defier_mass().is_zero());
        }
        Feasibility::Infeasible(_) => panic!("running example is consistent"),
    }
}

#[test]
fn solve_is_invariant_to_row_order_and_duplication() {
    let p = p_star();
    let spec = build_lp(&p, EM);
    let f = event_functional(Event::from_mask(0b0110));
    let base_max = checked_solve(&spec, &f, Maximize);
    let base_min = checked_solve(&spec, &f, Minimize);

    // Reversed row order.
    let mut reversed = LinearProgramSpec::simplex_only();
    let rows = spec.rows();
    for row in rows.iter().rev() {
        reversed = reversed.with_row(
            &LinearFunctional::from_fn(|w| row.coefficients[w.index()].clone()),
            row.rhs.clone(),
        );
    }
    assert_eq!(checked_solve(&reversed, &f, Maximize), base_max);
    assert_eq!(checked_solve(&reversed, &f, Minimize), base_min);

    // Duplicated data rows on top of the original spec.
    let mut duplicated = spec.clone();
    for row in rows.iter().take(4) {
        duplicated = duplicated.with_row(
            &LinearFunctional::from_fn(|w| row.coefficients[w.index()].clone()),
            row.rhs.clone(),
        );
    }
    assert_eq!(checked_solve(&duplicated, &f, Maximize), base_max);
    assert_eq!(checked_solve(&duplicated, &f, Minimize), base_min);
}

#[test]
fn oracle_agreement_on_sampled_distributions() {
    for seed in [5u64, 17] {
        let (p, _) = ivbounds::analysis::sample_consistent(seed, 60, EM);
        for mask in [0b0001u8, 0b0110] {
            let f = event_functional(Event::from_mask(mask));
            for assumptions in [E, EM] {
                let spec = build_lp(&p, assumptions);
                let (lo, hi) = brute::optimum_range(&spec, &f).expect("feasible");
                assert_eq!(checked_solve(&spec, &f, Minimize), lo);
                assert_eq!(checked_solve(&spec, &f, Maximize), hi);
            }
        }
    }
}

#[test]
fn zero_functional_admits_the_zero_dual_vertex() {
    let spec = build_lp(&p_star(), E);
    let vertices = enumerate_dual_vertices(&spec, &LinearFunctional::zero(), Maximize).unwrap();
    let optimum = vertices.iter().map(|v| &v.objective_value).min().unwrap();
    assert!(optimum.is_zero());
    assert!(vertices.iter().any(|v| v.u.iter().all(|x| x.is_zero())));
}

#[test]
fn dual_vertex_enumeration_reproduces_primal_optima() {
    let p = p_star();
    let f = event_functional(Event::singleton(OutcomeCell::new(false, false)));
    for (assumptions, direction) in [(E, Maximize), (E, Minimize), (EM, Maximize), (EM, Minimize)] {
        let spec = build_lp(&p, assumptions);
        let primal = checked_solve(&spec, &f, direction);
        let vertices = enumerate_dual_vertices(&spec, &f, direction).unwrap();
        assert!(!vertices.is_empty());
        for vertex in &vertices {
            assert!(vertex.verify(&spec, &f, direction), "dual vertex fails replay");
            match direction {
                Maximize => assert!(vertex.objective_value >= primal),
                Minimize => assert!(vertex.objective_value <= primal),
            }
        }
        let extremum = match direction {
            Maximize => vertices.iter().map(|v| &v.objective_value).min(),
            Minimize => vertices.iter().map(|v| &v.objective_value).max(),
        }
        .unwrap();
        assert_eq!(*extremum, primal);
    }
    // The pair ordering of the inequality form is the documented one.
    let (a, b) = inequality_form(&build_lp(&p, E));
    assert_eq!(a.len(), 18);
    assert_eq!(b.len(), 18);
    assert_eq!(a[0], a[1].iter().map(|c| -c).collect::<Vec<_>>());
    assert_eq!(b[0], -b[1].clone());
}

#[test]
fn dual_enumeration_refuses_infeasible_specs() {
    let spec = build_lp(&p_bad(), E);
    let err = enumerate_dual_vertices(&spec, &LinearFunctional::zero(), Maximize).unwrap_err();
    assert!(err.certificate.verify(&spec));
}

#[test]
fn membership_accepts_targets_read_off_a_witness() {
    let p = p_star();
    for assumptions in [E, EM] {
        let spec = build_lp(&p, assumptions);
        let Feasibility::Feasible(q) = feasibility(&spec) else { panic!("feasible") };
        let targets: [Rational; 4] = std::array::from_fn(|k| {
            q.event_mass(Event::singleton(OutcomeCell::from_index(k)))
        });
        match image_membership(&p, assumptions, &targets).unwrap() {
            Membership::Member(witness) => {
                assert_eq!(push_forward(&witness), p);
                for cell in OutcomeCell::all() {
                    assert_eq!(
                        witness.event_mass(Event::singleton(cell)),
                        targets[cell.index()]
                    );
                }
                if assumptions == EM {
                    assert!(witness.defier_mass().is_zero());
                }
            }
            Membership::NotInImage(_) => panic!("witness-derived targets must be members"),
        }
    }
}

#[test]
fn membership_rejects_targets_below_the_sharp_lower_bound() {
    let p = p_star();
    // mu{(0,1)} = 0 is out of reach under monotonicity (sharp lower bound 1/10)
    // but attainable under exogeneity alone once completed feasibly.
    let witness = ivbounds::analysis::sharpness_witness(
        &p,
        strict_benefit_event(),
        E,
        &Rational::zero(),
    )
    .unwrap();
    let targets: [Rational; 4] = std::array::from_fn(|k| {
        witness.event_mass(Event::singleton(OutcomeCell::from_index(k)))
    });
    assert!(targets[OutcomeCell::new(false, true).index()].is_zero());

    match image_membership(&p, EM, &targets).unwrap() {
        Membership::NotInImage(certificate) => {
            let mut spec = build_lp(&p, EM);
            for cell in OutcomeCell::all() {
                spec = spec.with_row(
                    &event_functional(Event::singleton(cell)),
                    targets[cell.index()].clone(),
                );
            }
            assert!(certificate.verify(&spec));
        }
        Membership::Member(_) => panic!("zero benefit mass contradicts the monotone lower bound"),
    }
    assert!(image_membership(&p, E, &targets).unwrap().is_member());
}

#[test]
fn per_singleton_intervals_do_not_imply_membership() {
    // Each target below sits inside its own singleton interval and the targets
    // sum to one, yet no admissible mass function matches them jointly: they
    // force total mass one onto outcome pairs with y0 = 0 while the data keep
    // P[1,0|0] = 1/5 on types with y0 = 1. Joint membership is genuinely
    // stronger than the per-singleton interval checks.
    let p = p_star();
    let targets = [ratio(1, 2), ratio(1, 2), ratio(0, 1), ratio(0, 1)];
    for (cell, target) in OutcomeCell::all().zip(&targets) {
        let event = Event::singleton(cell);
        for assumptions in [E, EM] {
            let spec = build_lp(&p, assumptions);
            let f = event_functional(event);
            let lo = checked_solve(&spec, &f, Minimize);
            let hi = checked_solve(&spec, &f, Maximize);
            assert!(lo <= *target && *target <= hi, "target inside its own interval");
        }
    }
    for assumptions in [E, EM] {
        match image_membership(&p, assumptions, &targets).unwrap() {
            Membership::NotInImage(_) => {}
            Membership::Member(_) => panic!("row-event bound rules these targets out"),
        }
    }
}

#[test]
fn membership_validates_target_shape() {
    let p = p_star();
    let negative = [ratio(-1, 10), ratio(1, 2), ratio(3, 10), ratio(3, 10)];
    assert!(matches!(
        image_membership(&p, E, &negative),
        Err(ivbounds::Error::MalformedTargets(_))
    ));
    let off_sum = [ratio(1, 10), ratio(1, 10), ratio(1, 10), ratio(1, 10)];
    assert!(matches!(
        image_membership(&p, E, &off_sum),
        Err(ivbounds::Error::MalformedTargets(_))
    ));
}

#[test]
fn h_representation_agrees_with_the_feasibility_route() {
    let p = p_star();
    for assumptions in [E, EM] {
        let h = image_h_representation(assumptions);
        assert!(!h.inequalities.is_empty());

        // Member instance from an actual witness.
        let spec = build_lp(&p, assumptions);
        let Feasibility::Feasible(q) = feasibility(&spec) else { panic!("feasible") };
        let targets: [Rational; 4] = std::array::from_fn(|k| {
            q.event_mass(Event::singleton(OutcomeCell::from_index(k)))
        });
        assert!(h.contains(&image_coordinates(&p, &targets)));
        assert!(image_membership(&p, assumptions, &targets).unwrap().is_member());

        // Non-member instance: the per-singleton counterexample.
        let bad = [ratio(1, 2), ratio(1, 2), ratio(0, 1), ratio(0, 1)];
        assert!(!h.contains(&image_coordinates(&p, &bad)));
        assert!(!image_membership(&p, assumptions, &bad).unwrap().is_member());
    }

    // The defier point masses are image points under exogeneity alone but not
    // under monotonicity.
    let defier = MassFunction::point_mass(ResponseType::new(true, false, true, false));
    let dp = push_forward(&defier);
    let targets: [Rational; 4] = std::array::from_fn(|k| {
        defier.event_mass(Event::singleton(OutcomeCell::from_index(k)))
    });
    let x = image_coordinates(&dp, &targets);
    assert!(image_h_representation(E).contains(&x));
    assert!(!image_h_representation(EM).contains(&x));
}

#[test]
fn witness_row_pins_event_mass_exactly() {
    let p = p_star();
    let event = Event::from_mask(0b1001);
    let spec = build_lp(&p, EM);
    let f = event_functional(event);
    let lo = checked_solve(&spec, &f, Minimize);
    let hi = checked_solve(&spec, &f, Maximize);
    let mid = (&lo + &hi) / ratio(2, 1);
    for target in [lo, mid, hi] {
        let pinned = spec.with_row(&f, target.clone());
        match feasibility(&pinned) {
            Feasibility::Feasible(q) => {
                assert_eq!(q.event_mass(event), target);
                assert_eq!(push_forward(&q), p);
            }
            Feasibility::Infeasible(_) => panic!("interval points are attainable"),
        }
    }
}
