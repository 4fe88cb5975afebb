//! Erasure of dℓPCF derivations to simply-typed PCF derivations.

use std::fmt;

use super::derivation::{Derivation, Path, Rule, StructuralError};
use crate::index::IndexTerm;
use crate::pcf::{pcf_check, PcfType, Term};
use crate::types::BasicType;

/// A PCF typing derivation `Γ ⊢ t : T`, one node per term constructor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcfDerivation {
    pub rule: Rule,
    /// Types of the variables in scope, innermost first.
    pub context: Vec<PcfType>,
    pub subject: Term,
    pub ty: PcfType,
    pub premises: Vec<PcfDerivation>,
}

impl PcfDerivation {
    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(PcfDerivation::node_count).sum::<usize>()
    }

    /// Checks every node against the PCF typing rule it claims to use.
    pub fn validate(&self) -> Result<(), StructuralError> {
        self.validate_at(&Path::root())
    }

    fn validate_at(&self, path: &Path) -> Result<(), StructuralError> {
        let fail = |what: String| Err(StructuralError::new(path, format!("erased rule {}: {what}", self.rule)));
        let p: Vec<&PcfType> = self.premises.iter().map(|q| &q.ty).collect();
        let nat = PcfType::Nat;
        let ok = match (&self.subject, p.as_slice()) {
            (Term::Var(i), []) => self.context.get(*i) == Some(&self.ty),
            (Term::Const(_), []) => self.ty == nat,
            (Term::Succ(_) | Term::Pred(_), [t]) => self.ty == nat && **t == nat,
            (Term::Lam(..), [t]) => {
                self.ty == PcfType::arrow(self.premises[0].context[0].clone(), (*t).clone())
                    && self.premises[0].context[1..] == self.context[..]
            }
            (Term::App(..), [f, a]) => **f == PcfType::arrow((*a).clone(), self.ty.clone()),
            (Term::IfZ(..), [c, z, s]) => **c == nat && **z == self.ty && **s == self.ty,
            (Term::Fix(..), [t]) => {
                **t == self.ty && self.premises[0].context[0] == self.ty && self.premises[0].context[1..] == self.context[..]
            }
            _ => false,
        };
        if !ok {
            return fail(format!("`{}` cannot have type {}", self.subject, self.ty));
        }
        if !matches!(self.subject, Term::Lam(..) | Term::Fix(..)) && self.premises.iter().any(|q| q.context != self.context) {
            return fail("premises must share the context".into());
        }
        pcf_check(&self.context, &self.subject, &self.ty)
            .map_err(|e| StructuralError::new(path, format!("erasure does not typecheck: {e}")))?;
        for (k, q) in self.premises.iter().enumerate() {
            q.validate_at(&path.child(k))?;
        }
        Ok(())
    }
}

impl fmt::Display for PcfDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(d: &PcfDerivation, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let ctx: Vec<String> = d.context.iter().rev().map(ToString::to_string).collect();
            writeln!(f, "{}{}  [{}] ⊢ {} : {}", "  ".repeat(depth), d.rule, ctx.join(", "), d.subject, d.ty)?;
            d.premises.iter().try_for_each(|p| go(p, depth + 1, f))
        }
        go(self, 0, f)
    }
}

/// `⟨π⟩`. Fails when some type in `π` does not erase to the type PCF gives
/// the corresponding variable or subterm.
pub fn erase_derivation(d: &Derivation) -> Result<PcfDerivation, StructuralError> {
    let e = erase_at(d, Vec::new(), &Path::root())?;
    e.validate()?;
    Ok(e)
}

fn erase_at(d: &Derivation, context: Vec<PcfType>, path: &Path) -> Result<PcfDerivation, StructuralError> {
    for (slot, name, m) in d.context.entries() {
        let erased = m.body.erase();
        if context.get(slot) != Some(&erased) {
            return Err(StructuralError::new(
                path,
                format!(
                    "`{name}` has PCF type {} but its context entry {m} erases to {erased}",
                    context.get(slot).map_or("?".into(), ToString::to_string)
                ),
            ));
        }
    }
    let ty = d.ty.erase();
    let mut premises = Vec::new();
    for (k, p) in d.premises.iter().enumerate() {
        let inner = match (&d.subject, &ty) {
            (Term::Lam(..), PcfType::Arrow(dom, _)) => prepend((**dom).clone(), &context),
            (Term::Lam(..), PcfType::Nat) => {
                return Err(StructuralError::new(path, format!("the abstraction `{}` is given type {}", d.subject, d.ty)));
            }
            (Term::Fix(..), _) => prepend(ty.clone(), &context),
            _ => context.clone(),
        };
        premises.push(erase_at(p, inner, &path.child(k))?);
    }
    Ok(PcfDerivation {
        rule: d.rule,
        context,
        subject: d.subject.clone(),
        ty,
        premises,
    })
}

fn prepend(t: PcfType, rest: &[PcfType]) -> Vec<PcfType> {
    let mut v = vec![t];
    v.extend_from_slice(rest);
    v
}

/// The weight and type of the conclusion.
pub fn root_bounds(d: &Derivation) -> (IndexTerm, BasicType) {
    (d.weight.clone(), d.ty.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    const DBL: &str = include_str!("../../data/dbl.deriv");

    #[test]
    fn dbl_erases_to_nat_to_nat() {
        let d: Derivation = DBL.parse().unwrap();
        let e = erase_derivation(&d).unwrap();
        assert_eq!(e.ty, PcfType::arrow(PcfType::Nat, PcfType::Nat));
        assert_eq!(e.node_count(), d.node_count());
        assert!(e.context.is_empty());
        // the recursive call sees f : Nat -> Nat and x : Nat
        let body = &e.premises[0].premises[0];
        assert_eq!(body.context, [PcfType::Nat, PcfType::arrow(PcfType::Nat, PcfType::Nat)]);
    }

    #[test]
    fn numeral_leaf() {
        let d: Derivation = "(derivation (subject \"7\") (root (N (weight \"k\") (type \"Nat[0, 9]\"))))".parse().unwrap();
        let e = erase_derivation(&d).unwrap();
        assert_eq!(e.rule, Rule::N);
        assert_eq!(e.ty, PcfType::Nat);
        assert_eq!(root_bounds(&d), ("k".parse().unwrap(), "Nat[0, 9]".parse().unwrap()));
    }

    #[test]
    fn ill_shaped_types_do_not_erase() {
        let d: Derivation = "(derivation (subject \"7\") (root (N (weight \"0\") (type \"[a < 1] Nat[0] -o Nat[7]\"))))"
            .parse()
            .unwrap();
        assert!(erase_derivation(&d).is_err());
        let wrong_ctx = DBL.replace("(x \"[c < 1] Nat[a - b]\")", "(x \"[c < 1] ([d < 1] Nat[0] -o Nat[a - b])\")");
        let d: Derivation = wrong_ctx.parse().unwrap();
        let e = erase_derivation(&d).unwrap_err();
        assert!(e.message.contains("erases to"), "{e}");
    }

    #[test]
    fn root_bounds_of_dbl() {
        let d: Derivation = DBL.parse().unwrap();
        let (w, t) = root_bounds(&d);
        assert!(w.alpha_eq(&"a + sum(b < a + 1, a - b)".parse().unwrap()));
        assert!(t.alpha_eq(&"[b < a + 1] Nat[a] -o Nat[mult(2, a)]".parse().unwrap()));
    }
}
