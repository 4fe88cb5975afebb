//! Well-definedness, subtyping and equivalence of types.
//!
//! Each judgement is first reduced to a list of atomic entailments by
//! structural recursion on the types; the atoms are then discharged through
//! the bounded oracle. Binders crossed on the way are renamed apart from the
//! variables already in scope.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use super::syntax::{BasicType, ModalType};
use crate::index::term::fresh_name;
use crate::index::{Constraint, ConstraintSet, Goal, IndexTerm, Oracle, Rel, Verdict};
use crate::pcf::PcfType;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("types have different shapes: {left} vs {right}")]
    Mismatch { left: PcfType, right: PcfType },
    #[error("index variable `{var}` escapes its scope in {ty}")]
    Escape { var: String, ty: String },
}

/// Either kind of dℓPCF type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Type {
    Basic(BasicType),
    Modal(ModalType),
}

impl From<BasicType> for Type {
    fn from(t: BasicType) -> Self {
        Type::Basic(t)
    }
}

impl From<ModalType> for Type {
    fn from(t: ModalType) -> Self {
        Type::Modal(t)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Basic(t) => write!(f, "{t}"),
            Type::Modal(t) => write!(f, "{t}"),
        }
    }
}

impl Type {
    fn erase(&self) -> PcfType {
        match self {
            Type::Basic(t) => t.erase(),
            Type::Modal(m) => m.body.erase(),
        }
    }
}

/// An atomic side condition `φ; Φ ⊨ goal`.
pub type Atom = (ConstraintSet, Goal);

fn relation(precise: bool) -> Rel {
    if precise {
        Rel::Eq
    } else {
        Rel::Le
    }
}

/// A name for a bound variable that does not clash with anything in scope.
fn fresh_for(base: &str, ctx: &ConstraintSet, types: &[&dyn HasVars]) -> String {
    let mut avoid = ctx.var_set();
    for t in types {
        avoid.extend(t.vars());
    }
    fresh_name(base, &avoid)
}

pub(crate) trait HasVars {
    fn vars(&self) -> std::collections::BTreeSet<String>;
}

impl HasVars for BasicType {
    fn vars(&self) -> std::collections::BTreeSet<String> {
        self.free_vars()
    }
}

impl HasVars for ModalType {
    fn vars(&self) -> std::collections::BTreeSet<String> {
        let mut v = self.free_vars();
        v.insert(self.binder.clone());
        v
    }
}

impl HasVars for IndexTerm {
    fn vars(&self) -> std::collections::BTreeSet<String> {
        self.free_vars()
    }
}

/// `φ, v; Φ, v < I` together with the body of `[a < I] σ` renamed to `v`.
pub(crate) fn open_modal(ctx: &ConstraintSet, m: &ModalType, others: &[&dyn HasVars]) -> (ConstraintSet, String) {
    let mut all: Vec<&dyn HasVars> = vec![m];
    all.extend_from_slice(others);
    let v = if ctx.has_var(&m.binder) || others.iter().any(|o| o.vars().contains(&m.binder)) {
        fresh_for(&m.binder, ctx, &all)
    } else {
        m.binder.clone()
    };
    let v = if v == "_" { fresh_for("i", ctx, &all) } else { v };
    let inner = ctx.extend(&v, Constraint::lt(IndexTerm::Var(v.clone()), m.bound.clone()));
    (inner, v)
}

pub fn well_defined_atoms(ctx: &ConstraintSet, t: &Type, out: &mut Vec<Atom>) {
    match t {
        Type::Basic(BasicType::Nat(i, j)) => {
            out.push((ctx.clone(), Goal::Defined(i.clone())));
            out.push((ctx.clone(), Goal::Defined(j.clone())));
        }
        Type::Basic(BasicType::Arrow(a, s)) => {
            well_defined_atoms(ctx, &Type::Modal((**a).clone()), out);
            well_defined_atoms(ctx, &Type::Basic((**s).clone()), out);
        }
        Type::Modal(m) => {
            let (inner, v) = open_modal(ctx, m, &[]);
            well_defined_atoms(&inner, &Type::Basic(m.instance(&IndexTerm::Var(v))), out);
            out.push((ctx.clone(), Goal::Defined(m.bound.clone())));
        }
    }
}

fn shape_check(s: &Type, t: &Type) -> Result<(), ShapeError> {
    let (l, r) = (s.erase(), t.erase());
    if l == r {
        Ok(())
    } else {
        Err(ShapeError::Mismatch { left: l, right: r })
    }
}

pub fn subtype_atoms(
    ctx: &ConstraintSet,
    s: &Type,
    t: &Type,
    precise: bool,
    out: &mut Vec<Atom>,
) -> Result<(), ShapeError> {
    shape_check(s, t)?;
    let rel = relation(precise);
    match (s, t) {
        (Type::Basic(BasicType::Nat(i, j)), Type::Basic(BasicType::Nat(k, h))) => {
            out.push((ctx.clone(), Goal::Holds(Constraint::new(k.clone(), rel, i.clone()))));
            out.push((ctx.clone(), Goal::Holds(Constraint::new(j.clone(), rel, h.clone()))));
        }
        (Type::Basic(BasicType::Arrow(a, s1)), Type::Basic(BasicType::Arrow(b, t1))) => {
            subtype_atoms(ctx, &Type::Modal((**b).clone()), &Type::Modal((**a).clone()), precise, out)?;
            subtype_atoms(ctx, &Type::Basic((**s1).clone()), &Type::Basic((**t1).clone()), precise, out)?;
        }
        (Type::Modal(a), Type::Modal(b)) => {
            let (inner, v) = open_modal(ctx, a, &[b]);
            let vt = IndexTerm::Var(v);
            subtype_atoms(
                &inner,
                &Type::Basic(a.instance(&vt)),
                &Type::Basic(b.instance(&vt)),
                precise,
                out,
            )?;
            out.push((
                ctx.clone(),
                Goal::Holds(Constraint::new(b.bound.clone(), rel, a.bound.clone())),
            ));
        }
        _ => unreachable!("shapes were compared above"),
    }
    Ok(())
}

/// A side condition of a typing rule or type operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Judgement {
    Entails(ConstraintSet, Goal),
    Subtype {
        ctx: ConstraintSet,
        sub: Type,
        sup: Type,
        precise: bool,
    },
    Equiv {
        ctx: ConstraintSet,
        left: Type,
        right: Type,
    },
    WellDefined(ConstraintSet, Type),
}

impl Judgement {
    pub fn kind(&self) -> &'static str {
        match self {
            Judgement::Entails(..) => "entailment",
            Judgement::Subtype { .. } | Judgement::Equiv { .. } => "subtyping",
            Judgement::WellDefined(..) => "well-definedness",
        }
    }

    pub fn context(&self) -> &ConstraintSet {
        match self {
            Judgement::Entails(c, _) | Judgement::WellDefined(c, _) => c,
            Judgement::Subtype { ctx, .. } | Judgement::Equiv { ctx, .. } => ctx,
        }
    }

    pub fn atoms(&self) -> Result<Vec<Atom>, ShapeError> {
        let mut out = Vec::new();
        match self {
            Judgement::Entails(c, g) => out.push((c.clone(), g.clone())),
            Judgement::Subtype {
                ctx,
                sub,
                sup,
                precise,
            } => subtype_atoms(ctx, sub, sup, *precise, &mut out)?,
            Judgement::Equiv { ctx, left, right } => {
                subtype_atoms(ctx, left, right, false, &mut out)?;
                subtype_atoms(ctx, right, left, false, &mut out)?;
            }
            Judgement::WellDefined(c, t) => well_defined_atoms(c, t, &mut out),
        }
        Ok(out)
    }

    pub fn discharge(&self, oracle: &Oracle<'_>) -> Result<Verdict, ShapeError> {
        let atoms = self.atoms()?;
        Ok(Verdict::all(
            oracle.bound,
            atoms.iter().map(|(c, g)| oracle.entails(c, g)),
        ))
    }
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Judgement::Entails(c, g) => write!(f, "{c} ⊨ {g}"),
            Judgement::Subtype {
                ctx,
                sub,
                sup,
                precise,
            } => write!(f, "{ctx} ⊢ {sub} {} {sup}", if *precise { "≅" } else { "⊑" }),
            Judgement::Equiv { ctx, left, right } => write!(f, "{ctx} ⊢ {left} ≅ {right}"),
            Judgement::WellDefined(c, t) => write!(f, "{c} ⊢ ↓{t}"),
        }
    }
}

/// Discharges independent judgements in parallel. Results come back in the
/// order of the input.
pub fn discharge_all(judgements: &[Judgement], oracle: &Oracle<'_>) -> Vec<Result<Verdict, ShapeError>> {
    judgements.par_iter().map(|j| j.discharge(oracle)).collect()
}

pub fn well_defined(ctx: &ConstraintSet, t: impl Into<Type>, oracle: &Oracle<'_>) -> Verdict {
    Judgement::WellDefined(ctx.clone(), t.into())
        .discharge(oracle)
        .expect("well-definedness has no shape condition")
}

pub fn subtype(
    ctx: &ConstraintSet,
    sub: impl Into<Type>,
    sup: impl Into<Type>,
    oracle: &Oracle<'_>,
    precise: bool,
) -> Result<Verdict, ShapeError> {
    Judgement::Subtype {
        ctx: ctx.clone(),
        sub: sub.into(),
        sup: sup.into(),
        precise,
    }
    .discharge(oracle)
}

pub fn equiv(
    ctx: &ConstraintSet,
    left: impl Into<Type>,
    right: impl Into<Type>,
    oracle: &Oracle<'_>,
) -> Result<Verdict, ShapeError> {
    Judgement::Equiv {
        ctx: ctx.clone(),
        left: left.into(),
        right: right.into(),
    }
    .discharge(oracle)
}
