//! dℓPCF types: indexed naturals, linear arrows and bounded modalities.

pub mod judge;
pub mod sum;
pub mod syntax;

pub use judge::{discharge_all, equiv, subtype, well_defined, Judgement, ShapeError, Type};
pub use sum::{bounded_sum_checks, bounded_sum_modal, sum_modal, sum_modal_checks};
pub use syntax::{arrow, modal, nat, nat1, BasicType, ModalType};

/// `⟨σ⟩`.
pub fn erase(t: &BasicType) -> crate::pcf::PcfType {
    t.erase()
}
