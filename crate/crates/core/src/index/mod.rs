//! Index terms, first-order equational programs that give meaning to their
//! function symbols, and bounded entailment between constraints.

pub mod entail;
pub mod eval;
pub mod parse;
pub mod program;
pub mod term;

pub use entail::{
    entails, Assignment, Constraint, ConstraintSet, Goal, Oracle, Rel, UnknownReason, Verdict,
    DEFAULT_BOUND, DEFAULT_FUEL,
};
pub use eval::{eval_index, EvalError, MAX_DEPTH};
pub use program::{register_program, Equation, EquationalProgram, Pattern, ProgramError, Signature};
pub use term::{app, forest, fresh_name, lit, sum, var, IndexTerm};
