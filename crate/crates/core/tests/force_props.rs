use actmediator::ontology::{derive_force, ForceDescriptor, ForceOp, Primitive};
use proptest::prelude::*;

fn op() -> impl Strategy<Value = ForceOp> {
    let label = || "[a-d]{1,2}";
    prop_oneof![
        label().prop_map(ForceOp::AddContentCondition),
        label().prop_map(ForceOp::AddPreparatory),
        label().prop_map(ForceOp::AddSincerity),
        label().prop_map(ForceOp::RestrictMode),
        (0..4u32).prop_map(ForceOp::Strengthen),
        (0..4u32).prop_map(ForceOp::Weaken),
    ]
}

fn base() -> impl Strategy<Value = ForceDescriptor> {
    prop::sample::select(Primitive::ALL.to_vec()).prop_map(ForceDescriptor::primitive)
}

proptest! {
    #[test]
    fn operation_order_does_not_matter(
        base in base(),
        (ops, shuffled) in prop::collection::vec(op(), 0..8).prop_flat_map(|v| (Just(v.clone()), Just(v).prop_shuffle())),
    ) {
        prop_assert_eq!(derive_force(&base, &ops), derive_force(&base, &shuffled));
    }

    #[test]
    fn deriving_in_two_parts_is_deriving_once(base in base(), a in prop::collection::vec(op(), 0..5), b in prop::collection::vec(op(), 0..5)) {
        let whole: Vec<ForceOp> = a.iter().chain(&b).cloned().collect();
        prop_assert_eq!(derive_force(&derive_force(&base, &a), &b), derive_force(&base, &whole));
    }

    #[test]
    fn base_primitive_is_kept(base in base(), ops in prop::collection::vec(op(), 0..8)) {
        prop_assert_eq!(derive_force(&base, &ops).base, base.base);
    }
}
