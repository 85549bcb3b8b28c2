//! Naive realization: sweep every axiom over every individual until nothing
//! changes, testing class expressions directly against the assertions.

use std::collections::BTreeSet;

use actmediator::ontology::{AxiomKind, ClassExpr, Primitive, TBoxAxiom};
use actmediator::{ABox, Assertion, Symbol, Value};

fn satisfies(abox: &ABox, x: &Symbol, e: &ClassExpr) -> bool {
    match e {
        ClassExpr::Atomic(c) => abox.contains(&Assertion::class(c.clone(), x.clone())),
        ClassExpr::Conjunction(parts) => parts.iter().all(|p| satisfies(abox, x, p)),
        ClassExpr::Existential { property, filler } => abox.iter().any(|a| match a {
            Assertion::Property {
                property: p,
                subject,
                object: Value::Individual(y),
            } => p == property && subject == x && satisfies(abox, y, filler),
            _ => false,
        }),
    }
}

fn top_level_atoms(e: &ClassExpr) -> Vec<Symbol> {
    match e {
        ClassExpr::Atomic(c) => vec![c.clone()],
        ClassExpr::Conjunction(parts) => parts.iter().flat_map(top_level_atoms).collect(),
        ClassExpr::Existential { .. } => Vec::new(),
    }
}

/// Assertions entailed by `m` and not in it.
pub fn realize(axioms: &[TBoxAxiom], m: &ABox) -> ABox {
    let individuals: BTreeSet<Symbol> = m.individuals();
    let mut cur = m.clone();
    loop {
        let mut next = cur.clone();
        for ax in axioms {
            for x in &individuals {
                if cur.contains(&Assertion::class(ax.lhs.clone(), x.clone())) {
                    for c in top_level_atoms(&ax.rhs) {
                        next.insert(Assertion::class(c, x.clone()));
                    }
                }
                if ax.kind == AxiomKind::EquivalentTo
                    && !Primitive::is_primitive_class(ax.lhs.as_str())
                    && satisfies(&cur, x, &ax.rhs)
                {
                    next.insert(Assertion::class(ax.lhs.clone(), x.clone()));
                }
            }
        }
        if next == cur {
            return cur.difference(m);
        }
        cur = next;
    }
}
