//! Commitment lifecycles. Each case runs one step with Σ_C plus the act
//! effects given, under a context Γ at t0.

use actmediator::commitments::{sigma_c, sigma_t, ActEffects};
use actmediator::constraints::ConstraintSet;
use actmediator::ec::{parse_observations, step, Event, Narrative, Observations, StepInput};
use actmediator::notation::Notation;
use actmediator::{ABox, Assertion};

use super::dec;

pub struct Case {
    pub name: &'static str,
    pub gamma: &'static str,
    pub effects: &'static str,
    pub act: &'static str,
    pub sender: &'static str,
    pub receiver: &'static str,
    pub phi: &'static str,
}

pub const CASES: &[Case] = &[
    Case {
        name: "creditor_meets_condition_cc_becomes_c",
        gamma: "HoldsAt(CC(bob,ann,paid,shipped),t0)",
        effects: "Pay: initiates paid",
        act: "Pay",
        sender: "ann",
        receiver: "bob",
        phi: "HoldsAt(paid,t0+1)\nHoldsAt(C(bob,ann,shipped),t0+1)\n¬HoldsAt(CC(bob,ann,paid,shipped),t0+1)",
    },
    Case {
        name: "debtor_meeting_condition_changes_nothing",
        gamma: "HoldsAt(CC(bob,ann,paid,shipped),t0)",
        effects: "Pay: initiates paid",
        act: "Pay",
        sender: "bob",
        receiver: "ann",
        phi: "HoldsAt(paid,t0+1)\nHoldsAt(CC(bob,ann,paid,shipped),t0+1)",
    },
    Case {
        name: "debtor_brings_about_proposition_c_discharged",
        gamma: "HoldsAt(C(bob,ann,shipped),t0)",
        effects: "Ship: initiates shipped",
        act: "Ship",
        sender: "bob",
        receiver: "ann",
        phi: "HoldsAt(shipped,t0+1)\n¬HoldsAt(C(bob,ann,shipped),t0+1)",
    },
    Case {
        name: "creditor_bringing_about_proposition_keeps_c",
        gamma: "HoldsAt(C(bob,ann,shipped),t0)",
        effects: "Ship: initiates shipped",
        act: "Ship",
        sender: "ann",
        receiver: "bob",
        phi: "HoldsAt(shipped,t0+1)\nHoldsAt(C(bob,ann,shipped),t0+1)",
    },
    Case {
        name: "cc_discharged_before_condition",
        gamma: "HoldsAt(CC(bob,ann,paid,shipped),t0)",
        effects: "Ship: initiates shipped",
        act: "Ship",
        sender: "bob",
        receiver: "ann",
        phi: "HoldsAt(shipped,t0+1)\n¬HoldsAt(CC(bob,ann,paid,shipped),t0+1)",
    },
    Case {
        name: "cc_discharged_with_condition_already_true",
        gamma: "HoldsAt(CC(bob,ann,paid,shipped),t0)\nHoldsAt(paid,t0)",
        effects: "Ship: initiates shipped",
        act: "Ship",
        sender: "bob",
        receiver: "ann",
        phi: "HoldsAt(paid,t0+1)\nHoldsAt(shipped,t0+1)\n¬HoldsAt(CC(bob,ann,paid,shipped),t0+1)",
    },
    Case {
        name: "act_creates_conditional_commitment",
        gamma: "",
        effects: "Ask: initiates CC(receiver, sender, accept(receiver, sender, content), content)",
        act: "Ask",
        sender: "ann",
        receiver: "bob",
        phi: "HoldsAt(CC(bob,ann,accept(bob,ann,q1),q1),t0+1)",
    },
    Case {
        name: "unrelated_commitments_persist",
        gamma: "HoldsAt(C(bob,ann,shipped),t0)\nHoldsAt(C(carl,ann,paid),t0)",
        effects: "Ship: initiates shipped",
        act: "Ship",
        sender: "bob",
        receiver: "ann",
        phi: "HoldsAt(shipped,t0+1)\n¬HoldsAt(C(bob,ann,shipped),t0+1)\nHoldsAt(C(carl,ann,paid),t0+1)",
    },
];

pub struct Outcome {
    pub engine: Observations,
    pub oracle: Observations,
    pub expected: Observations,
}

pub fn run(case: &Case) -> Outcome {
    let n = Notation::plain();
    let gamma = parse_observations(case.gamma, &n).expect("gamma");
    let expected = parse_observations(case.phi, &n).expect("phi");
    let mut sigma = sigma_c();
    sigma.extend(sigma_t(&ActEffects::parse(case.effects).expect("effects")));
    let narrative = Narrative::singleton(Event::send(case.act, "m"), 0);
    let abox: ABox = [
        Assertion::link("hasSender", "m", case.sender),
        Assertion::link("hasReceiver", "m", case.receiver),
        Assertion::link("hasContent", "m", "q1"),
    ]
    .into_iter()
    .collect();
    let engine = step(&StepInput {
        gamma: &gamma,
        narrative: &narrative,
        sigma: &sigma,
        psi: &ConstraintSet::default(),
        abox: &abox,
        time: 0,
    })
    .expect("roles bound")
    .phi;
    let oracle = dec::step(&gamma, &narrative, &sigma, &[], &abox, 0).phi;
    Outcome {
        engine,
        oracle,
        expected,
    }
}
