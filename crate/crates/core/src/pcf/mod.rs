//! PCF: syntax with de Bruijn indices, the size measure, simple types and
//! weak-head reduction.

pub mod parse;
pub mod reduce;
pub mod term;
pub mod typing;

pub use parse::{parse, parse_type};
pub use reduce::{wh_eval, wh_step, ReduceError, Step};
pub use term::{Binder, PcfType, Term};
pub use typing::{pcf_check, pcf_typecheck, TypeError};

/// `|t|`.
pub fn size(t: &Term) -> u64 {
    t.size()
}
