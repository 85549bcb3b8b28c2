//! Random instances for the property suites.

use std::collections::BTreeSet;

use actmediator::checker::{ConversionCase, Side};
use actmediator::codec::{AssertionContent, Content, Envelope, Sexp, StructuredMessage, Syntax};
use actmediator::commitments::sigma_c;
use actmediator::constraints::{generate, ConstraintSet, EventConstraint, StateConstraint};
use actmediator::ec::{
    Condition, EffectAxiom, EffectKind, Event, EventPattern, Narrative, Observation, Observations,
    Time,
};
use actmediator::ontology::{ClassExpr, Ontology, Primitive, TBoxAxiom};
use actmediator::term::Term;
use actmediator::{ABox, Assertion, Symbol};
use proptest::prelude::*;
use proptest::sample::subsequence;

pub const ACTS: [&str; 4] = ["A0", "A1", "A2", "A3"];
pub const FLUENTS: [&str; 6] = ["f0", "f1", "f2", "f3", "f4", "f5"];

/// One step of the event calculus with named fluents and a single message.
#[derive(Debug, Clone)]
pub struct StepCase {
    pub gamma: Observations,
    pub narrative: Narrative,
    pub sigma: Vec<EffectAxiom>,
    pub events: Vec<(Symbol, Symbol)>,
    pub states: Vec<(Symbol, Symbol)>,
    pub abox: ABox,
    pub time: Time,
}

impl StepCase {
    pub fn psi(&self) -> ConstraintSet {
        let mut psi = ConstraintSet::default();
        for (a, b) in &self.events {
            psi.event.insert(EventConstraint {
                trigger: a.clone(),
                implied: b.clone(),
                source: TBoxAxiom::sub_class_of(a.clone(), ClassExpr::Atomic(b.clone())),
            });
        }
        for (a, b) in &self.states {
            psi.state.insert(StateConstraint {
                body: vec![Term::Sym(a.clone())],
                head: Term::Sym(b.clone()),
                source: TBoxAxiom::sub_class_of(a.clone(), ClassExpr::Atomic(b.clone())),
            });
        }
        psi
    }
}

fn kind() -> impl Strategy<Value = EffectKind> {
    prop_oneof![
        Just(EffectKind::Initiates),
        Just(EffectKind::Terminates),
        Just(EffectKind::Releases)
    ]
}

fn effect_axiom(fluents: usize) -> impl Strategy<Value = EffectAxiom> {
    let cond = (any::<bool>(), 0..fluents).prop_map(|(holds, i)| {
        let f = Term::sym(FLUENTS[i]);
        if holds {
            Condition::HoldsAt(f)
        } else {
            Condition::Initiates(f)
        }
    });
    let event = prop_oneof![
        7 => prop::sample::select(ACTS.to_vec()).prop_map(|a| EventPattern::Send(a.into())),
        1 => Just(EventPattern::CausedBy("x".into())),
    ];
    (
        event,
        kind(),
        0..fluents,
        prop::collection::vec(cond, 0..=2),
    )
        .prop_map(|(event, effect, f, conditions)| EffectAxiom {
            label: None,
            conditions,
            event,
            effect,
            fluent: Term::sym(FLUENTS[f]),
        })
}

/// Two distinct members of `pool`, which must hold at least two.
fn pair(pool: &'static [&'static str]) -> impl Strategy<Value = (Symbol, Symbol)> {
    let n = pool.len();
    (0..n, 1..n).prop_map(move |(i, d)| (Symbol::new(pool[i]), Symbol::new(pool[(i + d) % n])))
}

/// At most six fluents, three narrative events, eight effect axioms and six
/// constraints.
pub fn step_case() -> impl Strategy<Value = StepCase> {
    (1..=FLUENTS.len(), 0..3u32).prop_flat_map(|(nf, time)| {
        (
            subsequence(ACTS.to_vec(), 1..=3),
            subsequence(FLUENTS[..nf].to_vec(), 0..=nf),
            prop::collection::vec(0..nf, 0..=2),
            prop::collection::vec(effect_axiom(nf), 0..=8),
            prop::collection::vec(pair(&ACTS[..]), 0..=4),
            prop::collection::vec(pair(&FLUENTS[..nf.max(2)]), 0..=if nf > 1 { 2 } else { 0 }),
            any::<bool>(),
        )
            .prop_map(
                move |(acts, holding, noise, mut sigma, events, states, receiver)| {
                    // At most one axiom keyed on the causing agent.
                    let mut seen = false;
                    for ax in &mut sigma {
                        if matches!(ax.event, EventPattern::CausedBy(_)) {
                            if seen {
                                ax.event = EventPattern::Send(ACTS[0].into());
                            }
                            seen = true;
                        }
                    }
                    let mut gamma: Observations = holding
                        .iter()
                        .map(|f| Observation::holds_at(Term::sym(*f), time))
                        .collect();
                    for i in noise {
                        gamma.insert(Observation::holds_at(Term::sym(FLUENTS[i]), time + 1));
                    }
                    let narrative = Narrative {
                        events: acts.iter().map(|a| (Event::send(*a, "m"), time)).collect(),
                    };
                    let mut abox = ABox::new();
                    abox.insert(Assertion::link("hasSender", "m", "a0"));
                    if receiver {
                        abox.insert(Assertion::link("hasReceiver", "m", "a1"));
                    }
                    StepCase {
                        gamma,
                        narrative,
                        sigma,
                        events,
                        states,
                        abox,
                        time,
                    }
                },
            )
    })
}

pub const CLASSES: [&str; 6] = ["C0", "C1", "C2", "C3", "C4", "Directive"];
pub const PROPERTIES: [&str; 2] = ["p0", "p1"];
pub const INDIVIDUALS: [&str; 8] = ["i0", "i1", "i2", "i3", "i4", "i5", "i6", "i7"];

fn atomic() -> impl Strategy<Value = ClassExpr> {
    prop::sample::select(CLASSES.to_vec()).prop_map(ClassExpr::atomic)
}

fn class_expr() -> impl Strategy<Value = ClassExpr> {
    atomic().prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            (prop::sample::select(PROPERTIES.to_vec()), inner.clone())
                .prop_map(|(p, e)| ClassExpr::some(p, e)),
            prop::collection::vec(inner, 2..=3).prop_map(ClassExpr::and),
        ]
    })
}

fn tbox_axiom() -> impl Strategy<Value = TBoxAxiom> {
    (
        prop::sample::select(CLASSES.to_vec()),
        any::<bool>(),
        class_expr(),
    )
        .prop_map(|(lhs, eq, rhs)| {
            if eq {
                TBoxAxiom::equivalent_to(lhs, rhs)
            } else {
                TBoxAxiom::sub_class_of(lhs, rhs)
            }
        })
}

fn assertion() -> impl Strategy<Value = Assertion> {
    let ind = || prop::sample::select(INDIVIDUALS.to_vec());
    prop_oneof![
        (prop::sample::select(CLASSES.to_vec()), ind()).prop_map(|(c, i)| Assertion::class(c, i)),
        (prop::sample::select(PROPERTIES.to_vec()), ind(), ind())
            .prop_map(|(p, a, b)| Assertion::link(p, a, b)),
        (
            prop::sample::select(PROPERTIES.to_vec()),
            ind(),
            "[a-z ]{0,4}"
        )
            .prop_map(|(p, a, l)| Assertion::literal(p, a, l)),
    ]
}

/// At most six axioms over six classes (one a primitive), and at most
/// eight individuals.
pub fn realize_case() -> impl Strategy<Value = (Vec<TBoxAxiom>, ABox)> {
    (
        prop::collection::vec(tbox_axiom(), 0..=6),
        prop::collection::vec(assertion(), 0..=14),
    )
        .prop_map(|(axioms, assertions)| (axioms, assertions.into_iter().collect()))
}

pub fn primitive_in_pool() -> bool {
    CLASSES.iter().any(|c| Primitive::is_primitive_class(c))
}

fn plain() -> impl Strategy<Value = String> {
    "[A-Za-z][A-Za-z0-9_.-]{0,7}"
}

fn free_text() -> impl Strategy<Value = String> {
    prop_oneof![plain(), "[ -~]{0,12}", "[a-z]{1,4}\n[a-z]{0,3}"]
}

fn sexp() -> impl Strategy<Value = Sexp> {
    let leaf = prop_oneof![
        plain().prop_map(Sexp::Atom),
        "\\?[a-z]{1,3}".prop_map(Sexp::Atom),
        "[0-9]{1,4}".prop_map(Sexp::Atom),
        free_text().prop_map(Sexp::Str),
    ];
    leaf.prop_recursive(3, 16, 4, |inner| {
        prop::collection::vec(inner, 1..=4).prop_map(Sexp::List)
    })
}

fn envelope(reserved: &'static [&'static str]) -> impl Strategy<Value = Envelope> {
    (
        plain(),
        plain(),
        plain(),
        plain(),
        prop::option::of(plain()),
        prop::collection::btree_map(
            plain().prop_filter("reserved", move |k| !reserved.contains(&k.as_str())),
            free_text(),
            0..=3,
        ),
    )
        .prop_map(
            |(id, performative, sender, receiver, language, params)| Envelope {
                id: id.into(),
                performative: performative.into(),
                sender: sender.into(),
                receiver: receiver.into(),
                language: language.map(Symbol::from),
                params: params
                    .into_iter()
                    .map(|(k, v)| (Symbol::from(k), v))
                    .collect(),
            },
        )
}

const ACL_RESERVED: [&str; 5] = ["sender", "receiver", "content", "language", "message-id"];
const BLOCK_RESERVED: [&str; 5] = [
    "hasSender",
    "hasReceiver",
    "hasContent",
    "hasLanguage",
    "rdf:type",
];

fn content_assertion() -> impl Strategy<Value = Assertion> {
    prop_oneof![
        (plain(), plain()).prop_map(|(c, i)| Assertion::class(c, i)),
        (plain(), plain(), plain()).prop_map(|(p, a, b)| Assertion::link(p, a, b)),
        (plain(), plain(), free_text()).prop_map(|(p, a, l)| Assertion::literal(p, a, l)),
    ]
}

/// A message representable in `syntax`.
pub fn message(syntax: Syntax) -> BoxedStrategy<StructuredMessage> {
    if syntax.is_sexp() {
        let content = prop_oneof![
            Just(Content::Empty),
            prop::collection::vec(sexp(), 1..=3).prop_map(|v| Content::Sexp(Sexp::List(v))),
            plain().prop_map(|a| Content::Sexp(Sexp::Atom(a))),
            free_text().prop_map(|s| Content::Sexp(Sexp::Str(s))),
        ];
        (envelope(&ACL_RESERVED), content)
            .prop_map(|(e, c)| StructuredMessage::new(e, c))
            .boxed()
    } else {
        let content = prop_oneof![
            Just(Content::Empty),
            (plain(), prop::collection::vec(content_assertion(), 0..=5)).prop_map(
                |(root, assertions)| Content::Assertions(AssertionContent {
                    root: root.into(),
                    assertions
                })
            ),
        ];
        (envelope(&BLOCK_RESERVED), content)
            .prop_map(|(e, c)| StructuredMessage::new(e, c))
            .boxed()
    }
}

/// A conversion case with the same message on both sides.
#[derive(Debug, Clone)]
pub struct CheckCase {
    pub axioms: Vec<TBoxAxiom>,
    pub sigma: Vec<EffectAxiom>,
    pub abox: ABox,
    pub gamma: Observations,
    pub act: Symbol,
}

impl CheckCase {
    pub fn side(&self, axioms: &[TBoxAxiom], sigma: &[EffectAxiom]) -> Side {
        let onto = Ontology::from_axioms(axioms.iter().cloned());
        let vocabulary: BTreeSet<Symbol> = CLASSES.iter().map(|c| Symbol::new(*c)).collect();
        Side::new(self.act.clone(), sigma.to_vec(), generate(&onto))
            .with_abox(self.abox.clone(), vocabulary)
    }

    pub fn identity(&self) -> ConversionCase {
        let side = self.side(&self.axioms, &self.sigma);
        ConversionCase {
            message: "m".into(),
            source: side.clone(),
            target: side,
            gamma: self.gamma.clone(),
            time: 0,
        }
    }
}

pub fn check_case() -> impl Strategy<Value = CheckCase> {
    let act_axiom = (
        prop::sample::select(ACTS.to_vec()),
        prop::sample::select(ACTS.to_vec()),
    )
        .prop_filter("distinct", |(a, b)| a != b)
        .prop_map(|(a, b)| TBoxAxiom::sub_class_of(a, ClassExpr::atomic(b)));
    let axiom = prop_oneof![act_axiom, tbox_axiom()];
    let commitment = (0..FLUENTS.len()).prop_map(|i| {
        Term::app(
            "CC",
            vec![
                Term::var("r"),
                Term::var("s"),
                Term::sym(FLUENTS[i]),
                Term::var("P"),
            ],
        )
    });
    let t_axiom =
        prop_oneof![
            effect_axiom(FLUENTS.len()),
            (prop::sample::select(ACTS.to_vec()), commitment)
                .prop_map(|(a, f)| EffectAxiom::on_send(a, EffectKind::Initiates, f)),
        ];
    (
        prop::sample::select(ACTS.to_vec()),
        prop::collection::vec(axiom, 0..=5),
        prop::collection::vec(t_axiom, 0..=6),
        prop::collection::vec(assertion(), 0..=8),
        subsequence(FLUENTS.to_vec(), 0..=3),
        prop::collection::vec(prop::sample::select(INDIVIDUALS.to_vec()), 0..=2),
    )
        .prop_map(|(act, axioms, mut sigma, assertions, holding, committed)| {
            sigma.extend(sigma_c());
            let mut abox: ABox = assertions.into_iter().collect();
            abox.insert(Assertion::link("hasSender", "m", "a0"));
            abox.insert(Assertion::link("hasReceiver", "m", "a1"));
            abox.insert(Assertion::link("hasContent", "m", "i0"));
            let mut gamma: Observations = holding
                .iter()
                .map(|f| Observation::holds_at(Term::sym(*f), 0))
                .collect();
            for i in committed {
                let c = Term::app("C", vec![Term::sym("a0"), Term::sym("a1"), Term::sym(i)]);
                gamma.insert(Observation::holds_at(c, 0));
            }
            CheckCase {
                axioms,
                sigma,
                abox,
                gamma,
                act: act.into(),
            }
        })
}
