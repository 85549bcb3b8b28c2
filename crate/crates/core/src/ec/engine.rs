use std::collections::{BTreeMap, BTreeSet};

use super::{
    holding, Condition, EcError, EffectAxiom, EffectFact, EffectKind, Event, EventPattern,
    Narrative, Observation, Observations, Roles, Time,
};
use crate::abox::ABox;
use crate::constraints::{ConstraintSet, EventConstraint, StateConstraint};
use crate::notation::{self, Notation};
use crate::symbol::Symbol;
use crate::term::{Bindings, Term};

/// One justified conclusion, in the order the engine reached it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceStep {
    /// An event-occurrence constraint added an event.
    Event {
        derived: Event,
        from: Event,
        time: Time,
        constraint: EventConstraint,
    },
    /// An effect axiom was instantiated for an occurring event.
    Effect {
        fact: EffectFact,
        axiom: EffectAxiom,
        roles: Option<Roles>,
    },
    /// Initiated, hence true at the next timepoint.
    Dec9 {
        conclusion: Observation,
        fact: EffectFact,
        roles: Option<Roles>,
    },
    /// Terminated, hence false at the next timepoint.
    Dec10 {
        conclusion: Observation,
        fact: EffectFact,
        roles: Option<Roles>,
    },
    /// Released from inertia at the next timepoint.
    Released {
        conclusion: Observation,
        fact: EffectFact,
        roles: Option<Roles>,
    },
    /// Persisted by inertia.
    Dec5 {
        conclusion: Observation,
        from: Observation,
    },
    /// A state constraint fired while closing a set of observations.
    State {
        conclusion: Observation,
        constraint: StateConstraint,
        premises: Vec<Observation>,
    },
}

impl TraceStep {
    pub fn conclusion(&self, n: &Notation) -> String {
        match self {
            TraceStep::Event { derived, time, .. } => {
                format!("Happens({},{})", derived.render(n), notation::time(*time))
            }
            TraceStep::Effect { fact, roles, .. } => render_fact(fact, roles.as_ref(), n),
            TraceStep::Dec9 { conclusion, .. }
            | TraceStep::Dec10 { conclusion, .. }
            | TraceStep::Released { conclusion, .. }
            | TraceStep::Dec5 { conclusion, .. }
            | TraceStep::State { conclusion, .. } => conclusion.render(n),
        }
    }

    pub fn render(&self, n: &Notation) -> String {
        let why = match self {
            TraceStep::Event {
                from,
                time,
                constraint,
                ..
            } => {
                format!(
                    "Ψ {} with Happens({},{})",
                    constraint.render(n),
                    from.render(n),
                    notation::time(*time)
                )
            }
            TraceStep::Effect { axiom, .. } => format!("Σ {}", axiom.render(n)),
            TraceStep::Dec9 { fact, roles, .. } => {
                format!("DEC9 with {}", render_fact(fact, roles.as_ref(), n))
            }
            TraceStep::Dec10 { fact, roles, .. } => {
                format!("DEC10 with {}", render_fact(fact, roles.as_ref(), n))
            }
            TraceStep::Released { fact, roles, .. } => {
                format!("release with {}", render_fact(fact, roles.as_ref(), n))
            }
            TraceStep::Dec5 { from, .. } => format!("DEC5 with {}", from.render(n)),
            TraceStep::State {
                constraint,
                premises,
                ..
            } => {
                let p: Vec<String> = premises.iter().map(|o| o.render(n)).collect();
                format!("Ψ {} with {}", constraint.render(n), p.join(", "))
            }
        };
        format!("{}    [{why}]", self.conclusion(n))
    }
}

fn render_fact(f: &EffectFact, roles: Option<&Roles>, n: &Notation) -> String {
    let e = match roles {
        Some(r) => f.event.render_with_roles(r, n),
        None => f.event.render(n),
    };
    format!(
        "{}({e},{},{})",
        f.kind.name(),
        n.term(&f.fluent),
        notation::time(f.time)
    )
}

/// Least fixpoint of the event-occurrence constraints over `delta`.
pub fn close_events(delta: &Narrative, psi: &ConstraintSet) -> (Narrative, Vec<TraceStep>) {
    let mut out = delta.clone();
    let mut trace = Vec::new();
    let mut queue: Vec<(Event, Time)> = delta.events.iter().cloned().collect();
    while let Some((e, t)) = queue.pop() {
        for c in psi.event.iter().filter(|c| c.trigger == e.act) {
            let derived = Event {
                act: c.implied.clone(),
                message: e.message.clone(),
            };
            if out.events.insert((derived.clone(), t)) {
                trace.push(TraceStep::Event {
                    derived: derived.clone(),
                    from: e.clone(),
                    time: t,
                    constraint: c.clone(),
                });
                queue.push((derived, t));
            }
        }
    }
    (out, trace)
}

/// Ground effect facts forced by `sigma` for the occurring `events`, as a
/// least fixpoint (conditions on `Initiates` may depend on other effects of
/// the same event).
pub fn ground_effects(
    sigma: &[EffectAxiom],
    events: &Narrative,
    gamma: &Observations,
    abox: &ABox,
) -> Result<(BTreeSet<EffectFact>, Vec<TraceStep>), EcError> {
    let mut axioms: Vec<&EffectAxiom> = sigma.iter().collect();
    axioms.sort();
    axioms.dedup();
    let mut roles: BTreeMap<Symbol, Roles> = BTreeMap::new();
    for (e, _) in &events.events {
        roles
            .entry(e.message.clone())
            .or_insert_with(|| Roles::resolve(abox, &e.message));
    }
    let mut facts: BTreeSet<EffectFact> = BTreeSet::new();
    let mut trace = Vec::new();
    loop {
        let mut fresh = Vec::new();
        for (e, t) in &events.events {
            let r = &roles[&e.message];
            let holds = holding(gamma, *t);
            for ax in &axioms {
                let mut b = Bindings::new();
                match &ax.event {
                    EventPattern::Send(act) if *act == e.act => {
                        for (v, s) in r.bindings() {
                            b.bind(Symbol::new(v), Term::Sym(s.clone()));
                        }
                    }
                    EventPattern::Send(_) => continue,
                    EventPattern::CausedBy(x) => match r.agent() {
                        Some(a) => b.bind(x.clone(), Term::Sym(a.clone())),
                        None => continue,
                    },
                }
                let initiated: BTreeSet<Term> = facts
                    .iter()
                    .filter(|f| f.kind == EffectKind::Initiates && f.event == *e && f.time == *t)
                    .map(|f| f.fluent.clone())
                    .collect();
                let mut results = Vec::new();
                satisfy(&ax.conditions, &holds, &initiated, b, &mut results);
                for b in results {
                    let fluent = ax.fluent.substitute(&b);
                    if let Some(var) = fluent.vars().into_iter().next() {
                        return Err(EcError::UnboundVariable {
                            var,
                            axiom: ax.to_string(),
                            event: format!("{e} at {}", notation::time(*t)),
                        });
                    }
                    let fact = EffectFact {
                        kind: ax.effect,
                        event: e.clone(),
                        fluent,
                        time: *t,
                    };
                    if !facts.contains(&fact) && !fresh.iter().any(|(f, _, _)| *f == fact) {
                        let shown = uses_roles(ax).then(|| r.clone());
                        fresh.push((fact, (*ax).clone(), shown));
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        for (fact, axiom, roles) in fresh {
            facts.insert(fact.clone());
            trace.push(TraceStep::Effect { fact, axiom, roles });
        }
    }
    Ok((facts, trace))
}

pub(crate) fn uses_roles(ax: &EffectAxiom) -> bool {
    if !matches!(ax.event, EventPattern::Send(_)) {
        return false;
    }
    let mut vars = ax.fluent.vars();
    for c in &ax.conditions {
        match c {
            Condition::HoldsAt(f) | Condition::Initiates(f) => vars.extend(f.vars()),
        }
    }
    vars.iter().any(|v| {
        [
            super::VAR_SENDER,
            super::VAR_RECEIVER,
            super::VAR_CONTENT,
            super::VAR_ANSWER,
        ]
        .contains(&v.as_str())
    })
}

fn satisfy(
    conds: &[Condition],
    holds: &BTreeSet<Term>,
    initiated: &BTreeSet<Term>,
    b: Bindings,
    out: &mut Vec<Bindings>,
) {
    let Some((first, rest)) = conds.split_first() else {
        out.push(b);
        return;
    };
    let (pattern, pool) = match first {
        Condition::HoldsAt(f) => (f.substitute(&b), holds),
        Condition::Initiates(f) => (f.substitute(&b), initiated),
    };
    if pattern.is_ground() {
        if pool.contains(&pattern) {
            satisfy(rest, holds, initiated, b, out);
        }
        return;
    }
    for g in pool {
        let mut b2 = b.clone();
        if pattern.match_ground(g, &mut b2) {
            satisfy(rest, holds, initiated, b2, out);
        }
    }
}

/// Inputs of one inference step from `time` to `time + 1`.
#[derive(Debug, Clone, Copy)]
pub struct StepInput<'a> {
    pub gamma: &'a Observations,
    pub narrative: &'a Narrative,
    pub sigma: &'a [EffectAxiom],
    pub psi: &'a ConstraintSet,
    /// Assertions describing the messages of the narrative.
    pub abox: &'a ABox,
    pub time: Time,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepResult {
    /// Observations at `time + 1`.
    pub phi: Observations,
    /// Events at `time` after closure.
    pub events: Narrative,
    pub effects: BTreeSet<EffectFact>,
    pub trace: Vec<TraceStep>,
}

/// Computes Φ at `time + 1` with DEC9, DEC10 and DEC5. A fluent is released
/// at `time + 1` exactly when an occurring event releases it.
pub fn step(input: &StepInput<'_>) -> Result<StepResult, EcError> {
    let t = input.time;
    let now = Narrative {
        events: input
            .narrative
            .events
            .iter()
            .filter(|(_, u)| *u == t)
            .cloned()
            .collect(),
    };
    let (events, mut trace) = close_events(&now, input.psi);
    let (effects, effect_trace) = ground_effects(input.sigma, &events, input.gamma, input.abox)?;
    let mut shown: BTreeMap<&EffectFact, Option<Roles>> = BTreeMap::new();
    for s in &effect_trace {
        if let TraceStep::Effect { fact, roles, .. } = s {
            shown.entry(fact).or_insert_with(|| roles.clone());
        }
    }
    trace.extend(effect_trace.iter().cloned());

    let mut phi = Observations::new();
    let of = |k: EffectKind| -> BTreeSet<&Term> {
        effects
            .iter()
            .filter(|f| f.kind == k)
            .map(|f| &f.fluent)
            .collect()
    };
    let terminated = of(EffectKind::Terminates);
    let released = of(EffectKind::Releases);

    for (kind, f) in effects.iter().map(|f| (f.kind, f)) {
        let roles = shown.get(f).cloned().flatten();
        let (conclusion, step) = match kind {
            EffectKind::Initiates => {
                let o = Observation::holds_at(f.fluent.clone(), t + 1);
                (
                    o.clone(),
                    TraceStep::Dec9 {
                        conclusion: o,
                        fact: f.clone(),
                        roles,
                    },
                )
            }
            EffectKind::Terminates => {
                let o = Observation::not_holds_at(f.fluent.clone(), t + 1);
                (
                    o.clone(),
                    TraceStep::Dec10 {
                        conclusion: o,
                        fact: f.clone(),
                        roles,
                    },
                )
            }
            EffectKind::Releases => {
                let o = Observation::released_at(f.fluent.clone(), t + 1);
                (
                    o.clone(),
                    TraceStep::Released {
                        conclusion: o,
                        fact: f.clone(),
                        roles,
                    },
                )
            }
        };
        if phi.insert(conclusion) {
            trace.push(step);
        }
    }
    for f in holding(input.gamma, t) {
        if terminated.contains(&f) || released.contains(&f) {
            continue;
        }
        let o = Observation::holds_at(f.clone(), t + 1);
        if phi.insert(o.clone()) {
            trace.push(TraceStep::Dec5 {
                conclusion: o,
                from: Observation::holds_at(f, t),
            });
        }
    }
    Ok(StepResult {
        phi,
        events,
        effects,
        trace,
    })
}

/// No fluent is observed with both signs at one timepoint.
pub fn check_consistent(phi: &Observations) -> bool {
    phi.iter().all(|o| {
        let flipped = Observation {
            holds: !o.holds,
            ..o.clone()
        };
        !phi.contains(&flipped)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entailment {
    pub holds: bool,
    /// Observations of the entailed set not reached by the closure.
    pub missing: Observations,
    /// The premise set closed under the state constraints.
    pub closure: Observations,
    pub trace: Vec<TraceStep>,
}

/// Closes the positive `HoldsAt` part of `phi2` under the state constraints
/// of `psi`, timepoint by timepoint, and checks that every observation of
/// `phi1` is in the closure.
pub fn entails(phi2: &Observations, phi1: &Observations, psi: &ConstraintSet) -> Entailment {
    let mut closure = phi2.clone();
    let mut trace = Vec::new();
    let times: BTreeSet<Time> = phi2.iter().map(|o| o.time).collect();
    for t in times {
        let (_, firings) = psi.close(holding(phi2, t));
        for f in firings {
            let conclusion = Observation::holds_at(f.derived, t);
            if closure.insert(conclusion.clone()) {
                trace.push(TraceStep::State {
                    conclusion,
                    constraint: f.constraint,
                    premises: f
                        .premises
                        .into_iter()
                        .map(|p| Observation::holds_at(p, t))
                        .collect(),
                });
            }
        }
    }
    let missing: Observations = phi1.difference(&closure).cloned().collect();
    Entailment {
        holds: missing.is_empty(),
        missing,
        closure,
        trace,
    }
}
