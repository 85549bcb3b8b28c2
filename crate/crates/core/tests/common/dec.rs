//! Brute-force one-step oracle: grounds every effect axiom over a finite
//! universe, enumerates all subsets of the Happens and effect atoms, keeps
//! the subset-minimal models and reads Φ off the (unique) minimal one.
//!
//! The universe is the subterms of the fluents holding at `t`, the message
//! roles, and the heads obtained by binding role variables alone. Variables
//! outside it must be fixed by a `HoldsAt` condition, which holds for every
//! instance built in these tests.

use std::collections::{BTreeMap, BTreeSet};

use actmediator::ec::{
    Condition, EffectAxiom, EffectKind, Event, EventPattern, Narrative, Observation, Observations,
    Predicate, Time,
};
use actmediator::term::{Bindings, Term};
use actmediator::{ABox, Symbol, Value};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    Happens(Event),
    Effect(EffectKind, Event, Term),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleStep {
    pub phi: Observations,
    pub happens: BTreeSet<Event>,
    pub effects: BTreeSet<(EffectKind, Event, Term)>,
}

pub const MAX_ATOMS: usize = 20;

fn roles(abox: &ABox, message: &Symbol) -> BTreeMap<&'static str, Symbol> {
    let mut out = BTreeMap::from([("m", message.clone())]);
    for (var, prop) in [
        ("s", "hasSender"),
        ("r", "hasReceiver"),
        ("P", "hasContent"),
        ("RA", "respondsTo"),
    ] {
        for a in abox.iter() {
            if let actmediator::Assertion::Property {
                property,
                subject,
                object: Value::Individual(o),
            } = a
            {
                if property == prop && subject == message {
                    out.insert(var, o.clone());
                }
            }
        }
    }
    out
}

fn subterms(t: &Term, out: &mut BTreeSet<Term>) {
    out.insert(t.clone());
    if let Term::App(_, args) = t {
        for a in args {
            subterms(a, out);
        }
    }
}

fn vars_of(ax: &EffectAxiom) -> BTreeSet<Symbol> {
    let mut v: BTreeSet<Symbol> = ax.fluent.vars().into_iter().collect();
    for c in &ax.conditions {
        let (Condition::HoldsAt(f) | Condition::Initiates(f)) = c;
        v.extend(f.vars());
    }
    if let EventPattern::CausedBy(x) = &ax.event {
        v.insert(x.clone());
    }
    v
}

fn assignments(vars: &[Symbol], universe: &[Term], base: &Bindings, out: &mut Vec<Bindings>) {
    match vars.split_first() {
        None => out.push(base.clone()),
        Some((v, rest)) => {
            if base.get(v).is_some() {
                return assignments(rest, universe, base, out);
            }
            for u in universe {
                let mut b = base.clone();
                b.bind(v.clone(), u.clone());
                assignments(rest, universe, &b, out);
            }
        }
    }
}

pub fn step(
    gamma: &Observations,
    narrative: &Narrative,
    sigma: &[EffectAxiom],
    event_constraints: &[(Symbol, Symbol)],
    abox: &ABox,
    t: Time,
) -> OracleStep {
    let holds: BTreeSet<Term> = gamma
        .iter()
        .filter(|o| o.holds && o.predicate == Predicate::HoldsAt && o.time == t)
        .map(|o| o.fluent.clone())
        .collect();
    let delta: Vec<Event> = narrative
        .events
        .iter()
        .filter(|(_, u)| *u == t)
        .map(|(e, _)| e.clone())
        .collect();

    let messages: BTreeSet<Symbol> = delta.iter().map(|e| e.message.clone()).collect();
    let mut acts: BTreeSet<Symbol> = delta.iter().map(|e| e.act.clone()).collect();
    for (a, b) in event_constraints {
        acts.insert(a.clone());
        acts.insert(b.clone());
    }
    for ax in sigma {
        if let EventPattern::Send(a) = &ax.event {
            acts.insert(a.clone());
        }
    }
    let candidates: Vec<Event> = messages
        .iter()
        .flat_map(|m| acts.iter().map(move |a| Event::send(a.clone(), m.clone())))
        .collect();
    let role_map: BTreeMap<Symbol, BTreeMap<&str, Symbol>> = messages
        .iter()
        .map(|m| (m.clone(), roles(abox, m)))
        .collect();

    let mut universe = BTreeSet::new();
    for f in &holds {
        subterms(f, &mut universe);
    }
    for r in role_map.values() {
        for s in r.values() {
            universe.insert(Term::Sym(s.clone()));
        }
    }
    for ax in sigma {
        if let EventPattern::Send(_) = ax.event {
            for r in role_map.values() {
                let mut b = Bindings::new();
                for (v, s) in r {
                    b.bind(Symbol::new(v), Term::Sym(s.clone()));
                }
                let head = ax.fluent.substitute(&b);
                if head.is_ground() {
                    subterms(&head, &mut universe);
                }
            }
        }
    }
    let universe: Vec<Term> = universe.into_iter().collect();

    // Ground clauses: (Initiates preconditions, event, head).
    let mut clauses: Vec<(Vec<Atom>, Event, Atom)> = Vec::new();
    for ax in sigma {
        let vars: Vec<Symbol> = vars_of(ax).into_iter().collect();
        for e in &candidates {
            let mut base = Bindings::new();
            match &ax.event {
                EventPattern::Send(a) if *a == e.act => {
                    for (v, s) in &role_map[&e.message] {
                        base.bind(Symbol::new(v), Term::Sym(s.clone()));
                    }
                }
                EventPattern::Send(_) => continue,
                EventPattern::CausedBy(x) => match role_map[&e.message].get("s") {
                    Some(agent) => base.bind(x.clone(), Term::Sym(agent.clone())),
                    None => continue,
                },
            }
            let mut all = Vec::new();
            assignments(&vars, &universe, &base, &mut all);
            'inst: for b in all {
                let mut pre = Vec::new();
                for c in &ax.conditions {
                    match c {
                        Condition::HoldsAt(f) => {
                            if !holds.contains(&f.substitute(&b)) {
                                continue 'inst;
                            }
                        }
                        Condition::Initiates(f) => pre.push(Atom::Effect(
                            EffectKind::Initiates,
                            e.clone(),
                            f.substitute(&b),
                        )),
                    }
                }
                let head = Atom::Effect(ax.effect, e.clone(), ax.fluent.substitute(&b));
                clauses.push((pre, e.clone(), head));
            }
        }
    }

    let mut atoms: Vec<Atom> = candidates.iter().cloned().map(Atom::Happens).collect();
    for (_, _, h) in &clauses {
        if !atoms.contains(h) {
            atoms.push(h.clone());
        }
    }
    assert!(
        atoms.len() <= MAX_ATOMS,
        "oracle instance too large: {} atoms",
        atoms.len()
    );
    let index: BTreeMap<&Atom, usize> = atoms.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let bit = |a: &Atom| index.get(a).map(|i| 1u32 << i);

    // Horn clauses as (body mask, head bit); a body atom that is nobody's
    // head can never be true in a minimal model, so its clause is dropped.
    let mut horn: Vec<(u32, u32)> = Vec::new();
    for e in &delta {
        horn.push((0, bit(&Atom::Happens(e.clone())).unwrap()));
    }
    for m in &messages {
        for (a, b) in event_constraints {
            let from = bit(&Atom::Happens(Event::send(a.clone(), m.clone()))).unwrap();
            let to = bit(&Atom::Happens(Event::send(b.clone(), m.clone()))).unwrap();
            horn.push((from, to));
        }
    }
    'clause: for (pre, e, head) in &clauses {
        let mut body = bit(&Atom::Happens(e.clone())).unwrap();
        for p in pre {
            match bit(p) {
                Some(b) => body |= b,
                None => continue 'clause,
            }
        }
        horn.push((body, bit(head).unwrap()));
    }

    let n = atoms.len();
    let mut models: Vec<u32> = (0..(1u32 << n))
        .filter(|s| horn.iter().all(|(b, h)| s & b != *b || s & h != 0))
        .collect();
    models.sort_by_key(|s| s.count_ones());
    let mut minimal: Vec<u32> = Vec::new();
    for s in models {
        if !minimal.iter().any(|m| m & s == *m) {
            minimal.push(s);
        }
    }
    assert_eq!(
        minimal.len(),
        1,
        "definite theory with several minimal models"
    );
    let model = minimal[0];

    let mut happens = BTreeSet::new();
    let mut effects = BTreeSet::new();
    for (i, a) in atoms.iter().enumerate() {
        if model & (1 << i) == 0 {
            continue;
        }
        match a {
            Atom::Happens(e) => {
                happens.insert(e.clone());
            }
            Atom::Effect(k, e, f) => {
                effects.insert((*k, e.clone(), f.clone()));
            }
        }
    }

    let mut phi = Observations::new();
    for (k, _, f) in &effects {
        phi.insert(match k {
            EffectKind::Initiates => Observation::holds_at(f.clone(), t + 1),
            EffectKind::Terminates => Observation::not_holds_at(f.clone(), t + 1),
            EffectKind::Releases => Observation::released_at(f.clone(), t + 1),
        });
    }
    for f in &holds {
        let stopped = effects
            .iter()
            .any(|(k, _, g)| g == f && *k != EffectKind::Initiates);
        if !stopped {
            phi.insert(Observation::holds_at(f.clone(), t + 1));
        }
    }
    OracleStep {
        phi,
        happens,
        effects,
    }
}
