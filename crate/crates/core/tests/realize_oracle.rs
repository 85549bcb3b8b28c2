mod common;

use actmediator::ontology::{realize, Ontology};
use common::{gen, realize as naive};
use proptest::prelude::*;

#[test]
fn pool_contains_a_primitive() {
    assert!(gen::primitive_in_pool());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn realize_matches_naive_fixpoint((axioms, m) in gen::realize_case()) {
        let onto = Ontology::from_axioms(axioms.clone());
        prop_assert_eq!(realize(&onto, &m), naive::realize(&axioms, &m));
    }

    #[test]
    fn realization_is_idempotent((axioms, m) in gen::realize_case()) {
        let onto = Ontology::from_axioms(axioms);
        let sat = m.union(&realize(&onto, &m));
        prop_assert!(realize(&onto, &sat).is_empty());
        prop_assert_eq!(sat.individuals(), m.individuals());
    }
}
