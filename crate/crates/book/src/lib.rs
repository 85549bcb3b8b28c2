//! The guide in `book/` as doctests, one module per chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/messages.md")]
pub mod messages {}
#[doc = include_str!("../../../book/src/ontology.md")]
pub mod ontology {}
#[doc = include_str!("../../../book/src/constraints.md")]
pub mod constraints {}
#[doc = include_str!("../../../book/src/event-calculus.md")]
pub mod event_calculus {}
#[doc = include_str!("../../../book/src/commitments.md")]
pub mod commitments {}
#[doc = include_str!("../../../book/src/checking.md")]
pub mod checking {}
#[doc = include_str!("../../../book/src/harness.md")]
pub mod harness {}
