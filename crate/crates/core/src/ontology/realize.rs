//! Forward-chaining realization over the supported TBox fragment.
//!
//! Axioms compile to two rule kinds. Downward rules copy membership from a
//! left-hand side to each atomic conjunct of its right-hand side. Recognition
//! rules, one per equivalence, derive the left-hand side for any individual
//! that satisfies the whole right-hand side through asserted property edges.
//! Only class assertions are ever derived and no individual is created, so
//! the worklist below always terminates.

use std::collections::{HashMap, HashSet, VecDeque};

use super::{AxiomKind, ClassExpr, Ontology, Primitive, TBoxAxiom};
use crate::abox::{ABox, Assertion, Value};
use crate::notation::Notation;
use crate::symbol::Symbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivationRule {
    /// Membership in the left-hand side implies membership in a conjunct.
    Down,
    /// The right-hand side of an equivalence is satisfied.
    Recognition,
}

/// One inference step, kept for explanations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub conclusion: Assertion,
    pub axiom: TBoxAxiom,
    pub rule: DerivationRule,
    pub premises: Vec<Assertion>,
}

impl std::fmt::Display for Derivation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let premises: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
        write!(f, "{}    [{}", self.conclusion, self.axiom)?;
        if !premises.is_empty() {
            write!(f, " with {}", premises.join(", "))?;
        }
        f.write_str("]")
    }
}

impl Derivation {
    /// Conclusion and premises in logic notation, followed by the axiom.
    pub fn render(&self, n: &Notation) -> String {
        let premises: Vec<String> = self.premises.iter().map(|p| p.render(n)).collect();
        let conclusion = self.conclusion.render(n);
        if premises.is_empty() {
            format!("{conclusion}    [{}]", self.axiom)
        } else {
            format!(
                "{conclusion}    [{} with {}]",
                self.axiom,
                premises.join(", ")
            )
        }
    }
}

struct Recognizer {
    axiom: usize,
    head: Symbol,
    body: ClassExpr,
    depth: usize,
}

/// Rules compiled once from an ontology; reusable across ABoxes.
pub struct Reasoner {
    axioms: Vec<TBoxAxiom>,
    down: HashMap<Symbol, Vec<(Symbol, usize)>>,
    recognizers: Vec<Recognizer>,
    by_class: HashMap<Symbol, Vec<usize>>,
}

impl Reasoner {
    pub fn new(onto: &Ontology) -> Self {
        let axioms: Vec<TBoxAxiom> = onto.axioms().cloned().collect();
        let mut down: HashMap<Symbol, Vec<(Symbol, usize)>> = HashMap::new();
        let mut recognizers = Vec::new();
        let mut by_class: HashMap<Symbol, Vec<usize>> = HashMap::new();
        for (i, ax) in axioms.iter().enumerate() {
            for c in ax.rhs.atomic_conjuncts() {
                down.entry(ax.lhs.clone()).or_default().push((c.clone(), i));
            }
            if ax.kind == AxiomKind::EquivalentTo && !Primitive::is_primitive_class(ax.lhs.as_str())
            {
                let r = recognizers.len();
                for c in ax.rhs.class_names() {
                    by_class.entry(c).or_default().push(r);
                }
                recognizers.push(Recognizer {
                    axiom: i,
                    head: ax.lhs.clone(),
                    body: ax.rhs.clone(),
                    depth: ax.rhs.depth(),
                });
            }
        }
        Reasoner {
            axioms,
            down,
            recognizers,
            by_class,
        }
    }

    /// Assertions entailed by `m` and not already in it.
    pub fn realize(&self, m: &ABox) -> ABox {
        self.run(m, None)
    }

    /// As [`Reasoner::realize`], also returning one derivation per new
    /// assertion in the order they were found.
    pub fn realize_traced(&self, m: &ABox) -> (ABox, Vec<Derivation>) {
        let mut trace = Vec::new();
        let out = self.run(m, Some(&mut trace));
        (out, trace)
    }

    fn run(&self, m: &ABox, mut trace: Option<&mut Vec<Derivation>>) -> ABox {
        let mut st = State::new(m);
        let mut queue: VecDeque<(Symbol, Symbol)> = m
            .iter()
            .filter_map(|a| match a {
                Assertion::Class { class, individual } => Some((individual.clone(), class.clone())),
                _ => None,
            })
            .collect();
        let mut derived = ABox::new();

        while let Some((x, c)) = queue.pop_front() {
            if let Some(parents) = self.down.get(&c) {
                for (d, ax) in parents {
                    if st.add(&x, d) {
                        let conclusion = Assertion::class(d.clone(), x.clone());
                        if let Some(t) = trace.as_deref_mut() {
                            t.push(Derivation {
                                conclusion: conclusion.clone(),
                                axiom: self.axioms[*ax].clone(),
                                rule: DerivationRule::Down,
                                premises: vec![Assertion::class(c.clone(), x.clone())],
                            });
                        }
                        derived.insert(conclusion);
                        queue.push_back((x.clone(), d.clone()));
                    }
                }
            }
            let Some(rules) = self.by_class.get(&c) else {
                continue;
            };
            for &r in rules {
                let rule = &self.recognizers[r];
                for y in st.within(&x, rule.depth) {
                    if st.has(&y, &rule.head) {
                        continue;
                    }
                    let mut premises = Vec::new();
                    if st.satisfies(&y, &rule.body, &mut premises) {
                        st.add(&y, &rule.head);
                        let conclusion = Assertion::class(rule.head.clone(), y.clone());
                        if let Some(t) = trace.as_deref_mut() {
                            t.push(Derivation {
                                conclusion: conclusion.clone(),
                                axiom: self.axioms[rule.axiom].clone(),
                                rule: DerivationRule::Recognition,
                                premises,
                            });
                        }
                        derived.insert(conclusion);
                        queue.push_back((y, rule.head.clone()));
                    }
                }
            }
        }
        derived.difference(m)
    }
}

struct State {
    types: HashMap<Symbol, HashSet<Symbol>>,
    out: HashMap<Symbol, Vec<(Symbol, Symbol)>>,
    inc: HashMap<Symbol, Vec<Symbol>>,
}

impl State {
    fn new(m: &ABox) -> Self {
        let mut st = State {
            types: HashMap::new(),
            out: HashMap::new(),
            inc: HashMap::new(),
        };
        for a in m {
            match a {
                Assertion::Class { class, individual } => {
                    st.types
                        .entry(individual.clone())
                        .or_default()
                        .insert(class.clone());
                }
                Assertion::Property {
                    property,
                    subject,
                    object: Value::Individual(o),
                } => {
                    st.out
                        .entry(subject.clone())
                        .or_default()
                        .push((property.clone(), o.clone()));
                    st.inc.entry(o.clone()).or_default().push(subject.clone());
                }
                Assertion::Property { .. } => {}
            }
        }
        st
    }

    fn has(&self, x: &Symbol, c: &Symbol) -> bool {
        self.types.get(x).is_some_and(|s| s.contains(c))
    }

    fn add(&mut self, x: &Symbol, c: &Symbol) -> bool {
        self.types.entry(x.clone()).or_default().insert(c.clone())
    }

    /// `x` and every individual with a property path of length at most
    /// `depth` into `x`.
    fn within(&self, x: &Symbol, depth: usize) -> Vec<Symbol> {
        let mut seen: HashSet<Symbol> = HashSet::from([x.clone()]);
        let mut frontier = vec![x.clone()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for y in &frontier {
                for p in self.inc.get(y).into_iter().flatten() {
                    if seen.insert(p.clone()) {
                        next.push(p.clone());
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<Symbol> = seen.into_iter().collect();
        out.sort();
        out
    }

    fn satisfies(&self, x: &Symbol, e: &ClassExpr, witness: &mut Vec<Assertion>) -> bool {
        match e {
            ClassExpr::Atomic(c) => {
                let ok = self.has(x, c);
                if ok {
                    witness.push(Assertion::class(c.clone(), x.clone()));
                }
                ok
            }
            ClassExpr::Conjunction(parts) => {
                let mark = witness.len();
                let ok = parts.iter().all(|p| self.satisfies(x, p, witness));
                if !ok {
                    witness.truncate(mark);
                }
                ok
            }
            ClassExpr::Existential { property, filler } => {
                let mut edges: Vec<&Symbol> = self
                    .out
                    .get(x)
                    .into_iter()
                    .flatten()
                    .filter(|(p, _)| p == property)
                    .map(|(_, y)| y)
                    .collect();
                edges.sort();
                for y in edges {
                    let mark = witness.len();
                    witness.push(Assertion::link(property.clone(), x.clone(), y.clone()));
                    if self.satisfies(y, filler, witness) {
                        return true;
                    }
                    witness.truncate(mark);
                }
                false
            }
        }
    }
}

pub fn realize(onto: &Ontology, m: &ABox) -> ABox {
    Reasoner::new(onto).realize(m)
}

/// `m` together with everything realization derives from it.
pub fn saturate(onto: &Ontology, m: &ABox) -> ABox {
    m.union(&realize(onto, m))
}
