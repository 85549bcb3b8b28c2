//! Handcrafted single-step cases. Every row sends its acts on message `m`
//! from `ann` to `bob` at t0 and states Φ at t0+1 in full.

use std::collections::BTreeSet;

use actmediator::commitments::{sigma_c, sigma_t, ActEffects};
use actmediator::constraints::{ConstraintSet, EventConstraint};
use actmediator::ec::{
    parse_observations, step, EffectAxiom, Event, Narrative, Observations, StepInput,
};
use actmediator::notation::Notation;
use actmediator::ontology::{ClassExpr, TBoxAxiom};
use actmediator::{ABox, Assertion};

pub struct Row {
    pub name: &'static str,
    /// What the row exercises, in the words of the DEC axioms.
    pub rule: &'static str,
    pub gamma: &'static str,
    pub effects: &'static str,
    pub acts: &'static [&'static str],
    /// `(trigger, implied)` event constraints.
    pub psi: &'static [(&'static str, &'static str)],
    pub commitments: bool,
    pub phi: &'static str,
}

pub const ROWS: &[Row] = &[
    Row {
        name: "inertia_without_events",
        rule: "DEC5",
        gamma: "HoldsAt(f,t0)",
        effects: "",
        acts: &[],
        psi: &[],
        commitments: false,
        phi: "HoldsAt(f,t0+1)",
    },
    Row {
        name: "inertia_of_several_fluents",
        rule: "DEC5",
        gamma: "HoldsAt(f,t0)\nHoldsAt(g,t0)\nHoldsAt(h(a,b),t0)",
        effects: "",
        acts: &[],
        psi: &[],
        commitments: false,
        phi: "HoldsAt(f,t0+1)\nHoldsAt(g,t0+1)\nHoldsAt(h(a,b),t0+1)",
    },
    Row {
        name: "empty_everything",
        rule: "DEC5",
        gamma: "",
        effects: "",
        acts: &[],
        psi: &[],
        commitments: false,
        phi: "",
    },
    Row {
        name: "event_without_effects_keeps_state",
        rule: "DEC5",
        gamma: "HoldsAt(f,t0)",
        effects: "A: initiates g",
        acts: &["B"],
        psi: &[],
        commitments: false,
        phi: "HoldsAt(f,t0+1)",
    },
    Row {
        name: "unrelated_termination_keeps_state",
        rule: "DEC5",
        gamma: "HoldsAt(f,t0)",
        effects: "A: terminates g",
        acts: &["A"],
        psi: &[],
        commitments: false,
        phi: "HoldsAt(f,t0+1)\n¬HoldsAt(g,t0+1)",
    },
    Row {
        name: "negative_observation_does_not_persist",
        rule: "DEC5",
        gamma: "¬HoldsAt(f,t0)",
        effects: "",
        acts: &[],
        psi: &[],
        commitments: false,
        phi: "",
    },
    Row {
        name: "initiation_from_nothing",
        rule: "DEC9",
        gamma: "",
        effects: "A: initiates g",
        acts: &["A"],
        psi: &[],
        commitments: false,
        phi: "HoldsAt(g,t0+1)",
    },
    Row {
        name: "initiation_of_role_bound_fluent",
        rule: "DEC9",
        gamma: "",
        effects: "A: initiates owes(sender, receiver)",
        acts: &["A"],
        psi: &[],
        commitments: false,
        phi: "HoldsAt(owes(ann,bob),t0+1)",
    },
    Row {
        name: "two_acts_initiate_two_fluents",
        rule: "DEC9",
        gamma: "",
        effects: "A: initiates g\nB: initiates h",
        acts: &["A", "B"],
        psi: &[],
        commitments: false,
        phi: "HoldsAt(g,t0+1)\nHoldsAt(h,t0+1)",
    },
    Row {
        name: "conditional_initiation_fires",
        rule: "DEC9",
        gamma: "HoldsAt(f,t0)",
        effects: "A: when f initiates g",
        acts: &["A"],
        psi: &[],
        commitments: false,
        phi: "HoldsAt(f,t0+1)\nHoldsAt(g,t0+1)",
    },
    Row {
        name: "conditional_initiation_blocked",
        rule: "DEC9",
        gamma: "",
        effects: "A: when f initiates g",
        acts: &["A"],
        psi: &[],
        commitments: false,
        phi: "",
    },
    Row {
        name: "condition_must_hold_not_just_be_mentioned",
        rule: "DEC9",
        gamma: "¬HoldsAt(f,t0)",
        effects: "A: when f initiates g",
        acts: &["A"],
        psi: &[],
        commitments: false,
        phi: "",
    },
    Row {
        name: "both_conditions_required",
        rule: "DEC9",
        gamma: "HoldsAt(f,t0)",
        effects: "A: when f, h initiates g",
        acts: &["A"],
        psi: &[],
        commitments: false,
        phi: "HoldsAt(f,t0+1)",
    },
    Row {
        name: "condition_binds_variable",
        rule: "DEC9",
        gamma: "HoldsAt(job(ann,x1),t0)\nHoldsAt(job(carl,x2),t0)",
        effects: "A: when job(sender, ?j) initiates done(?j)",
        acts: &["A"],
        psi: &[],
        commitments: false,
        phi: "HoldsAt(job(ann,x1),t0+1)\nHoldsAt(job(carl,x2),t0+1)\nHoldsAt(done(x1),t0+1)",
    },
    Row {
        name: "termination_of_holding_fluent",
        rule: "DEC10",
        gamma: "HoldsAt(f,t0)",
        effects: "A: terminates f",
        acts: &["A"],
        psi: &[],
        commitments: false,
        phi: "¬HoldsAt(f,t0+1)",
    },
    Row {
        name: "termination_of_absent_fluent",
        rule: "DEC10",
        gamma: "",
        effects: "A: terminates f",
        acts: &["A"],
        psi: &[],
        commitments: false,
        phi: "¬HoldsAt(f,t0+1)",
    },
    Row {
        name: "conditional_termination_blocked",
        rule: "DEC10",
        gamma: "HoldsAt(f,t0)",
        effects: "A: when h terminates f",
        acts: &["A"],
        psi: &[],
        commitments: false,
        phi: "HoldsAt(f,t0+1)",
    },
    Row {
        name: "termination_leaves_other_fluents",
        rule: "DEC10",
        gamma: "HoldsAt(f,t0)\nHoldsAt(g,t0)",
        effects: "A: terminates f",
        acts: &["A"],
        psi: &[],
        commitments: false,
        phi: "¬HoldsAt(f,t0+1)\nHoldsAt(g,t0+1)",
    },
    Row {
        name: "initiation_alongside_inertia",
        rule: "DEC5+DEC9",
        gamma: "HoldsAt(f,t0)",
        effects: "A: initiates g",
        acts: &["A"],
        psi: &[],
        commitments: false,
        phi: "HoldsAt(f,t0+1)\nHoldsAt(g,t0+1)",
    },
    Row {
        name: "reinitiation_of_holding_fluent",
        rule: "DEC5+DEC9",
        gamma: "HoldsAt(f,t0)",
        effects: "A: initiates f",
        acts: &["A"],
        psi: &[],
        commitments: false,
        phi: "HoldsAt(f,t0+1)",
    },
    Row {
        name: "swap_one_fluent_for_another",
        rule: "DEC5+DEC9+DEC10",
        gamma: "HoldsAt(f,t0)\nHoldsAt(h,t0)",
        effects: "A: terminates f\nA: initiates g",
        acts: &["A"],
        psi: &[],
        commitments: false,
        phi: "¬HoldsAt(f,t0+1)\nHoldsAt(g,t0+1)\nHoldsAt(h,t0+1)",
    },
    Row {
        name: "initiate_and_terminate_same_fluent",
        rule: "DEC9+DEC10",
        gamma: "",
        effects: "A: initiates f\nB: terminates f",
        acts: &["A", "B"],
        psi: &[],
        commitments: false,
        phi: "HoldsAt(f,t0+1)\n¬HoldsAt(f,t0+1)",
    },
    Row {
        name: "release_stops_inertia",
        rule: "DEC5+Releases",
        gamma: "HoldsAt(f,t0)",
        effects: "A: releases f",
        acts: &["A"],
        psi: &[],
        commitments: false,
        phi: "ReleasedAt(f,t0+1)",
    },
    Row {
        name: "implied_event_brings_its_effects",
        rule: "DEC9 after event closure",
        gamma: "HoldsAt(f,t0)",
        effects: "B: initiates g",
        acts: &["A"],
        psi: &[("A", "B")],
        commitments: false,
        phi: "HoldsAt(f,t0+1)\nHoldsAt(g,t0+1)",
    },
    Row {
        name: "implied_events_chain",
        rule: "DEC10 after event closure",
        gamma: "HoldsAt(f,t0)",
        effects: "C: terminates f",
        acts: &["A"],
        psi: &[("A", "B"), ("B", "C")],
        commitments: false,
        phi: "¬HoldsAt(f,t0+1)",
    },
    Row {
        name: "discussion_system_one",
        rule: "DEC5+DEC9",
        gamma: "HoldsAt(f,t0)",
        effects: "A1: initiates k\nA1: when f initiates g",
        acts: &["A1"],
        psi: &[],
        commitments: false,
        phi: "HoldsAt(k,t0+1)\nHoldsAt(g,t0+1)\nHoldsAt(f,t0+1)",
    },
    Row {
        name: "discussion_system_two",
        rule: "DEC5+DEC9",
        gamma: "HoldsAt(f,t0)",
        effects: "A2: initiates k",
        acts: &["A2"],
        psi: &[],
        commitments: false,
        phi: "HoldsAt(k,t0+1)\nHoldsAt(f,t0+1)",
    },
];

pub struct Instance {
    pub gamma: Observations,
    pub narrative: Narrative,
    pub sigma: Vec<EffectAxiom>,
    pub psi: ConstraintSet,
    pub abox: ABox,
    pub expected: Observations,
}

pub fn instance(row: &Row) -> Instance {
    let n = Notation::plain();
    let gamma = parse_observations(row.gamma, &n).expect("gamma");
    let expected = parse_observations(row.phi, &n).expect("phi");
    let mut sigma = sigma_t(&ActEffects::parse(row.effects).expect("effects"));
    if row.commitments {
        sigma.extend(sigma_c());
    }
    let narrative = Narrative {
        events: row.acts.iter().map(|a| (Event::send(*a, "m"), 0)).collect(),
    };
    let psi = ConstraintSet {
        system: None,
        state: BTreeSet::new(),
        event: row
            .psi
            .iter()
            .map(|(a, b)| EventConstraint {
                trigger: (*a).into(),
                implied: (*b).into(),
                source: TBoxAxiom::sub_class_of(*a, ClassExpr::atomic(*b)),
            })
            .collect(),
    };
    let abox: ABox = [
        Assertion::link("hasSender", "m", "ann"),
        Assertion::link("hasReceiver", "m", "bob"),
    ]
    .into_iter()
    .collect();
    Instance {
        gamma,
        narrative,
        sigma,
        psi,
        abox,
        expected,
    }
}

/// Runs one row and returns Φ, or a description of the mismatch.
pub fn run(row: &Row) -> Result<Observations, String> {
    let i = instance(row);
    let out = step(&StepInput {
        gamma: &i.gamma,
        narrative: &i.narrative,
        sigma: &i.sigma,
        psi: &i.psi,
        abox: &i.abox,
        time: 0,
    })
    .map_err(|e| format!("{}: {e}", row.name))?;
    if out.phi != i.expected {
        return Err(format!(
            "{} ({}): expected {:?}, got {:?}",
            row.name, row.rule, i.expected, out.phi
        ));
    }
    Ok(out.phi)
}
