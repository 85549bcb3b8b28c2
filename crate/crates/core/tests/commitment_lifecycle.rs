mod common;

use common::lifecycle;

#[test]
fn engine_matches_stated_outcome() {
    for case in lifecycle::CASES {
        let out = lifecycle::run(case);
        assert_eq!(out.engine, out.expected, "{}", case.name);
    }
}

#[test]
fn oracle_matches_stated_outcome() {
    for case in lifecycle::CASES {
        let out = lifecycle::run(case);
        assert_eq!(out.oracle, out.expected, "{}", case.name);
    }
}

#[test]
fn conditional_commitment_is_met_then_discharged() {
    use actmediator::commitments::{sigma_c, sigma_t, ActEffects};
    use actmediator::constraints::ConstraintSet;
    use actmediator::ec::{parse_observations, step, Event, Narrative, StepInput};
    use actmediator::notation::Notation;
    use actmediator::{ABox, Assertion};

    let n = Notation::plain();
    let mut sigma = sigma_c();
    sigma.extend(sigma_t(
        &ActEffects::parse("Pay: initiates paid\nShip: initiates shipped").unwrap(),
    ));
    let abox: ABox = [
        Assertion::link("hasSender", "m1", "ann"),
        Assertion::link("hasReceiver", "m1", "bob"),
        Assertion::link("hasSender", "m2", "bob"),
        Assertion::link("hasReceiver", "m2", "ann"),
    ]
    .into_iter()
    .collect();
    let psi = ConstraintSet::default();
    let narrative = Narrative {
        events: [
            (Event::send("Pay", "m1"), 0),
            (Event::send("Ship", "m2"), 1),
        ]
        .into(),
    };
    let mut gamma = parse_observations("HoldsAt(CC(bob,ann,paid,shipped),t0)", &n).unwrap();
    for t in 0..2 {
        let input = StepInput {
            gamma: &gamma,
            narrative: &narrative,
            sigma: &sigma,
            psi: &psi,
            abox: &abox,
            time: t,
        };
        gamma = step(&input).unwrap().phi;
    }
    let want = parse_observations(
        "HoldsAt(paid,t0+2)\nHoldsAt(shipped,t0+2)\n¬HoldsAt(C(bob,ann,shipped),t0+2)",
        &n,
    );
    assert_eq!(gamma, want.unwrap());
}
