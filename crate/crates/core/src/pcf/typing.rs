use thiserror::Error;

use super::term::{Binder, PcfType, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch in `{at}`: expected {expected}, found {found}")]
    Mismatch {
        expected: PcfType,
        found: PcfType,
        at: String,
    },
    #[error("`{at}` is applied but has type {found}")]
    NotAFunction { found: PcfType, at: String },
    #[error("binder `{binder}` needs a type annotation")]
    MissingAnnotation { binder: String },
    #[error("free variable #{0} is not in the context")]
    Unbound(usize),
}

/// Infers the PCF type of `t`. `gamma[i]` is the type of `Var(i)`.
///
/// Binders without annotations are accepted only where the expected type is
/// already known, i.e. when the binder sits in a checked position.
pub fn pcf_typecheck(gamma: &[PcfType], t: &Term) -> Result<PcfType, TypeError> {
    let mut ctx: Vec<PcfType> = gamma.iter().rev().cloned().collect();
    infer(&mut ctx, t)
}

/// Checks `t` against `ty`.
pub fn pcf_check(gamma: &[PcfType], t: &Term, ty: &PcfType) -> Result<(), TypeError> {
    let mut ctx: Vec<PcfType> = gamma.iter().rev().cloned().collect();
    check(&mut ctx, t, ty)
}

fn lookup(ctx: &[PcfType], i: usize) -> Result<PcfType, TypeError> {
    ctx.len()
        .checked_sub(i + 1)
        .map(|k| ctx[k].clone())
        .ok_or(TypeError::Unbound(i))
}

fn under<R>(ctx: &mut Vec<PcfType>, ty: PcfType, f: impl FnOnce(&mut Vec<PcfType>) -> R) -> R {
    ctx.push(ty);
    let r = f(ctx);
    ctx.pop();
    r
}

fn annotation(b: &Binder) -> Result<PcfType, TypeError> {
    b.ty.clone().ok_or_else(|| TypeError::MissingAnnotation {
        binder: b.name.clone(),
    })
}

fn infer(ctx: &mut Vec<PcfType>, t: &Term) -> Result<PcfType, TypeError> {
    match t {
        Term::Var(i) => lookup(ctx, *i),
        Term::Const(_) => Ok(PcfType::Nat),
        Term::Succ(u) | Term::Pred(u) => {
            check(ctx, u, &PcfType::Nat)?;
            Ok(PcfType::Nat)
        }
        Term::Lam(b, body) => {
            let dom = annotation(b)?;
            let cod = under(ctx, dom.clone(), |ctx| infer(ctx, body))?;
            Ok(PcfType::arrow(dom, cod))
        }
        Term::Fix(b, body) => {
            let ty = annotation(b)?;
            under(ctx, ty.clone(), |ctx| check(ctx, body, &ty))?;
            Ok(ty)
        }
        Term::App(f, a) => match infer(ctx, f)? {
            PcfType::Arrow(dom, cod) => {
                check(ctx, a, &dom)?;
                Ok(*cod)
            }
            found => Err(TypeError::NotAFunction {
                found,
                at: f.to_string(),
            }),
        },
        Term::IfZ(s, z, n) => {
            check(ctx, s, &PcfType::Nat)?;
            let ty = infer(ctx, z)?;
            check(ctx, n, &ty)?;
            Ok(ty)
        }
    }
}

fn check(ctx: &mut Vec<PcfType>, t: &Term, ty: &PcfType) -> Result<(), TypeError> {
    match (t, ty) {
        (Term::Lam(b, body), PcfType::Arrow(dom, cod)) => {
            if let Some(ann) = &b.ty {
                if ann != &**dom {
                    return Err(TypeError::Mismatch {
                        expected: (**dom).clone(),
                        found: ann.clone(),
                        at: t.to_string(),
                    });
                }
            }
            under(ctx, (**dom).clone(), |ctx| check(ctx, body, cod))
        }
        (Term::Fix(b, body), _) => {
            if let Some(ann) = &b.ty {
                if ann != ty {
                    return Err(TypeError::Mismatch {
                        expected: ty.clone(),
                        found: ann.clone(),
                        at: t.to_string(),
                    });
                }
            }
            under(ctx, ty.clone(), |ctx| check(ctx, body, ty))
        }
        (Term::IfZ(s, z, n), _) => {
            check(ctx, s, &PcfType::Nat)?;
            check(ctx, z, ty)?;
            check(ctx, n, ty)
        }
        _ => {
            let found = infer(ctx, t)?;
            if &found == ty {
                Ok(())
            } else {
                Err(TypeError::Mismatch {
                    expected: ty.clone(),
                    found,
                    at: t.to_string(),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcf::parse::parse;

    fn nat_to_nat() -> PcfType {
        PcfType::arrow(PcfType::Nat, PcfType::Nat)
    }

    #[test]
    fn dbl_has_type_nat_to_nat() {
        let dbl = parse("fix f:Nat -> Nat. \\x:Nat. ifz x then 0 else s(s(f (p x)))").unwrap();
        assert_eq!(pcf_typecheck(&[], &dbl), Ok(nat_to_nat()));
    }

    #[test]
    fn unannotated_binders_need_a_checked_position() {
        let dbl = parse("fix f. \\x. ifz x then 0 else s(s(f (p x)))").unwrap();
        assert!(matches!(
            pcf_typecheck(&[], &dbl),
            Err(TypeError::MissingAnnotation { .. })
        ));
        assert_eq!(pcf_check(&[], &dbl, &nat_to_nat()), Ok(()));
    }

    #[test]
    fn constants_and_bad_applications() {
        assert_eq!(pcf_typecheck(&[], &Term::Const(5)), Ok(PcfType::Nat));
        let bad = Term::app(Term::Const(0), Term::Const(0));
        assert!(matches!(
            pcf_typecheck(&[], &bad),
            Err(TypeError::NotAFunction { .. })
        ));
        let bad = Term::succ(Term::lam(Binder::typed("x", PcfType::Nat), Term::Var(0)));
        assert!(matches!(pcf_typecheck(&[], &bad), Err(TypeError::Mismatch { .. })));
    }

    #[test]
    fn context_is_in_de_bruijn_order() {
        // Var(0) : Nat, Var(1) : Nat -> Nat
        let t = Term::app(Term::Var(1), Term::Var(0));
        assert_eq!(
            pcf_typecheck(&[PcfType::Nat, nat_to_nat()], &t),
            Ok(PcfType::Nat)
        );
        assert_eq!(pcf_typecheck(&[], &Term::Var(0)), Err(TypeError::Unbound(0)));
    }

    #[test]
    fn ifz_branches_must_agree() {
        let t = parse("ifz 0 then 1 else \\x:Nat. x").unwrap();
        assert!(pcf_typecheck(&[], &t).is_err());
    }
}
