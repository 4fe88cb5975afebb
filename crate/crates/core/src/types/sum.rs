//! Sums of modal types.
//!
//! Both operations are partial and defined by the shape of their arguments,
//! so the caller names the type the summands are slices of. The checks below
//! confirm that each argument really is the slice the witness claims.

use super::judge::{Judgement, ShapeError};
use super::syntax::{modal, BasicType, ModalType};
use crate::index::term::fresh_name;
use crate::index::{sum, var, Constraint, ConstraintSet, IndexTerm, Oracle, Verdict};

fn avoid(ctx: &ConstraintSet, extra: &[&std::collections::BTreeSet<String>]) -> std::collections::BTreeSet<String> {
    let mut out = ctx.var_set();
    for e in extra {
        out.extend(e.iter().cloned());
    }
    out
}

/// `A ⊎ B` where `A = [a < I] μ[c := a]` and `B = [b < J] μ[c := I + b]`.
///
/// The witness is `(c, μ)`. Returns `[c < I + J] μ` together with the
/// verdict of the two equivalences.
pub fn sum_modal(
    a: &ModalType,
    b: &ModalType,
    witness: (&str, &BasicType),
    ctx: &ConstraintSet,
    oracle: &Oracle<'_>,
) -> Result<(ModalType, Verdict), ShapeError> {
    let (sum, checks) = sum_modal_checks(a, b, witness, ctx)?;
    Ok((sum, discharge(&checks, oracle)?))
}

fn discharge(checks: &[Judgement], oracle: &Oracle<'_>) -> Result<Verdict, ShapeError> {
    let mut acc = oracle.verified();
    for j in checks {
        acc = acc.and(j.discharge(oracle)?);
    }
    Ok(acc)
}

/// [`sum_modal`] without discharging: the sum and the equivalences that
/// justify it.
pub fn sum_modal_checks(
    a: &ModalType,
    b: &ModalType,
    witness: (&str, &BasicType),
    ctx: &ConstraintSet,
) -> Result<(ModalType, Vec<Judgement>), ShapeError> {
    let (c, mu) = witness;
    let i = &a.bound;
    let j = &b.bound;
    let (c, mu) = if ctx.has_var(c) {
        let fresh = fresh_name(c, &avoid(ctx, &[&mu.free_vars(), &i.free_vars()]));
        (fresh.clone(), mu.subst(c, &var(&fresh)))
    } else {
        (c.to_string(), mu.clone())
    };
    let left = modal(&c, i.clone(), mu.clone());
    let right = modal(&c, j.clone(), mu.subst(&c, &(i.clone() + var(&c))));
    let checks = vec![
        Judgement::Equiv {
            ctx: ctx.clone(),
            left: a.clone().into(),
            right: left.into(),
        },
        Judgement::Equiv {
            ctx: ctx.clone(),
            left: b.clone().into(),
            right: right.into(),
        },
    ];
    for j in &checks {
        j.atoms()?;
    }
    Ok((modal(&c, i.clone() + j.clone(), mu), checks))
}

/// `Σ_{a < I} A` where, under `a < I`,
/// `A = [b < J] σ[c := Σ_{d < a} J[a := d] + b]`.
///
/// The witness is `(c, σ, J)`. Returns `[c < Σ_{a < I} J] σ`.
pub fn bounded_sum_modal(
    binder: &str,
    bound: &IndexTerm,
    a: &ModalType,
    witness: (&str, &BasicType, &IndexTerm),
    ctx: &ConstraintSet,
    oracle: &Oracle<'_>,
) -> Result<(ModalType, Verdict), ShapeError> {
    let (sum, checks) = bounded_sum_checks(binder, bound, a, witness, ctx)?;
    Ok((sum, discharge(&checks, oracle)?))
}

/// [`bounded_sum_modal`] without discharging.
pub fn bounded_sum_checks(
    binder: &str,
    bound: &IndexTerm,
    a: &ModalType,
    witness: (&str, &BasicType, &IndexTerm),
    ctx: &ConstraintSet,
) -> Result<(ModalType, Vec<Judgement>), ShapeError> {
    let (c, sigma, j) = witness;
    if sigma.free_vars().contains(binder) && binder != c {
        return Err(ShapeError::Escape {
            var: binder.to_string(),
            ty: sigma.to_string(),
        });
    }
    let mut taken = avoid(ctx, &[&sigma.free_vars(), &j.free_vars(), &a.free_vars(), &bound.free_vars()]);
    taken.insert(binder.to_string());
    taken.insert(c.to_string());
    let b = fresh_name("b", &taken);
    taken.insert(b.clone());
    let d = fresh_name("d", &taken);
    let inner = ctx.extend(binder, Constraint::lt(var(binder), bound.clone()));
    let offset = sum(&d, var(binder), j.subst(binder, &var(&d))) + var(&b);
    let expected = modal(&b, j.clone(), sigma.subst(c, &offset));
    let check = Judgement::Equiv {
        ctx: inner,
        left: a.clone().into(),
        right: expected.into(),
    };
    check.atoms()?;
    Ok((modal(c, sum(binder, bound.clone(), j.clone()), sigma.clone()), vec![check]))
}
