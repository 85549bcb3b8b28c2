pub mod abox;
pub mod checker;
pub mod codec;
pub mod commitments;
pub mod constraints;
pub mod ec;
pub mod harness;
pub mod notation;
pub mod ontology;
pub mod symbol;
pub mod term;

pub use abox::{ABox, Assertion, Value};
pub use symbol::Symbol;
pub use term::Term;

#[cfg(test)]
pub(crate) mod testdata {
    use crate::ontology::Ontology;

    pub const MEDICAL: &str = include_str!("../../../scenarios/vital-signs/medical.ont");
    pub const AINGERU: &str = include_str!("../../../scenarios/vital-signs/aingeru.ont");

    fn with_common(text: &str) -> Ontology {
        let mut o = Ontology::seed_common();
        o.merge(&Ontology::parse(text).unwrap());
        o
    }

    pub fn medical() -> Ontology {
        with_common(MEDICAL)
    }

    pub fn aingeru() -> Ontology {
        with_common(AINGERU)
    }
}
