//! Rule-by-rule verification of derivations.
//!
//! Checking happens in two phases. A walk over the tree validates the
//! structure (premises where the rules put them, matching annotations, sums
//! that can be formed) and collects every semantic side condition as a
//! [`Judgement`]. The judgements are then discharged in parallel through the
//! bounded oracle and reported in tree order.

use std::collections::BTreeSet;
use std::fmt;

use super::derivation::{Derivation, Path, Rule, StructuralError, TypingContext};
use super::erase::erase_derivation;
use crate::index::{forest, lit, sum, var, Constraint, ConstraintSet, EquationalProgram, Goal, IndexTerm, Oracle, Rel, Verdict};
use crate::pcf::Term;
use crate::types::{bounded_sum_checks, discharge_all, modal, nat, sum_modal_checks, BasicType, Judgement, ModalType, ShapeError, Type};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObligationKind {
    Entailment,
    Subtyping,
    WellDefinedness,
}

impl fmt::Display for ObligationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObligationKind::Entailment => "entailment",
            ObligationKind::Subtyping => "subtyping",
            ObligationKind::WellDefinedness => "well-definedness",
        })
    }
}

impl ObligationKind {
    fn of(j: &Judgement) -> Self {
        match j {
            Judgement::Entails(..) => ObligationKind::Entailment,
            Judgement::Subtype { .. } | Judgement::Equiv { .. } => ObligationKind::Subtyping,
            Judgement::WellDefined(..) => ObligationKind::WellDefinedness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obligation {
    pub path: Path,
    pub rule: Rule,
    /// Which premise of the rule this is, e.g. `H ≥ J + I + Σ K`.
    pub label: String,
    pub kind: ObligationKind,
    pub judgement: Judgement,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub overall: Verdict,
    pub obligations: Vec<Obligation>,
    pub bound: u64,
    pub fuel: u64,
    pub precise: bool,
}

impl CheckReport {
    /// The first refuted obligation, if any.
    pub fn first_refuted(&self) -> Option<&Obligation> {
        self.obligations.iter().find(|o| o.verdict.is_refuted())
    }

    /// One obligation per line: path, rule, kind, label, verdict, judgement.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for o in &self.obligations {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                o.path, o.rule, o.kind, o.label, o.verdict, o.judgement
            ));
        }
        out.push_str(&format!("overall\t\t\t\t{}\t\n", self.overall));
        out
    }

    pub fn to_table(&self) -> String {
        let w_path = self.obligations.iter().map(|o| o.path.to_string().len()).max().unwrap_or(4).max(4);
        let w_label = self.obligations.iter().map(|o| o.label.chars().count()).max().unwrap_or(10).max(10);
        let mut out = format!("{:<w_path$}  rule  {:<w_label$}  verdict\n", "path", "obligation");
        for o in &self.obligations {
            let pad = w_label - o.label.chars().count();
            out.push_str(&format!(
                "{:<w_path$}  {:<4}  {}{}  {}\n",
                o.path.to_string(),
                o.rule.to_string(),
                o.label,
                " ".repeat(pad),
                o.verdict
            ));
            if !o.verdict.is_verified() {
                out.push_str(&format!("{:<w_path$}        {}\n", "", o.judgement));
            }
        }
        out.push_str(&format!(
            "\n{} obligations, fuel {}{}: {}\n",
            self.obligations.len(),
            self.fuel,
            if self.precise { ", precise" } else { "" },
            self.overall
        ));
        out
    }
}

struct Pending {
    path: Path,
    rule: Rule,
    label: String,
    judgement: Judgement,
}

struct Collector<'p> {
    program: &'p EquationalProgram,
    precise: bool,
    out: Vec<Pending>,
}

/// Verifies every rule instance of `d` against `program`.
///
/// Malformed trees give a [`StructuralError`]; otherwise every side
/// condition is discharged with the given search bound and fuel, and the
/// report lists them in tree order.
pub fn check(
    d: &Derivation,
    program: &EquationalProgram,
    bound: u64,
    fuel: u64,
    precise: bool,
) -> Result<CheckReport, StructuralError> {
    erase_derivation(d)?;
    let mut c = Collector {
        program,
        precise,
        out: Vec::new(),
    };
    c.node(d, &Path::root())?;
    let mut pending = c.out;
    pending.sort_by(|a, b| a.path.cmp(&b.path));
    for p in &pending {
        p.judgement.atoms().map_err(|e| StructuralError::new(&p.path, format!("{}: {e}", p.label)))?;
    }

    let oracle = Oracle::new(program, bound, fuel);
    let judgements: Vec<Judgement> = pending.iter().map(|p| p.judgement.clone()).collect();
    let verdicts = discharge_all(&judgements, &oracle);
    let mut obligations = Vec::with_capacity(pending.len());
    for (p, v) in pending.into_iter().zip(verdicts) {
        let verdict = v.map_err(|e| StructuralError::new(&p.path, format!("{}: {e}", p.label)))?;
        obligations.push(Obligation {
            kind: ObligationKind::of(&p.judgement),
            path: p.path,
            rule: p.rule,
            label: p.label,
            judgement: p.judgement,
            verdict,
        });
    }
    let overall = Verdict::all(bound, obligations.iter().map(|o| o.verdict.clone()));
    Ok(CheckReport {
        overall,
        obligations,
        bound,
        fuel,
        precise,
    })
}

fn type_vars(t: &Type) -> BTreeSet<String> {
    match t {
        Type::Basic(b) => b.free_vars(),
        Type::Modal(m) => m.free_vars(),
    }
}

fn type_terms(t: &Type) -> Vec<&IndexTerm> {
    match t {
        Type::Basic(b) => b.index_terms(),
        Type::Modal(m) => m.index_terms(),
    }
}

fn judgement_parts(j: &Judgement) -> (BTreeSet<String>, Vec<&IndexTerm>) {
    let types: Vec<&Type> = match j {
        Judgement::Entails(_, Goal::Holds(c)) => return (c.free_vars(), vec![&c.lhs, &c.rhs]),
        Judgement::Entails(_, Goal::Defined(t)) => return (t.free_vars(), vec![t]),
        Judgement::Subtype { sub, sup, .. } => vec![sub, sup],
        Judgement::Equiv { left, right, .. } => vec![left, right],
        Judgement::WellDefined(_, t) => vec![t],
    };
    let vars = types.iter().flat_map(|t| type_vars(t)).collect();
    let terms = types.into_iter().flat_map(type_terms).collect();
    (vars, terms)
}

fn nat_bounds<'t>(t: &'t BasicType, path: &Path, what: &str) -> Result<(&'t IndexTerm, &'t IndexTerm), StructuralError> {
    match t {
        BasicType::Nat(i, j) => Ok((i, j)),
        _ => Err(StructuralError::new(path, format!("{what} must have a type Nat[I, J], found {t}"))),
    }
}

/// `[_ < 0] σ` with the shape of `like`.
fn empty_like(like: &ModalType) -> ModalType {
    modal("_", lit(0), like.body.clone())
}

impl Collector<'_> {
    fn rel(&self) -> Rel {
        if self.precise {
            Rel::Eq
        } else {
            Rel::Le
        }
    }

    fn push(&mut self, path: &Path, rule: Rule, label: impl Into<String>, judgement: Judgement) {
        self.out.push(Pending {
            path: path.clone(),
            rule,
            label: label.into(),
            judgement,
        });
    }

    /// `φ; Φ ⊨ lhs ≤ rhs`, or `=` in precise mode.
    fn le(&mut self, d: &Derivation, path: &Path, label: &str, lhs: IndexTerm, rhs: IndexTerm) {
        let goal = Goal::Holds(Constraint::new(lhs, self.rel(), rhs));
        self.push(path, d.rule, label, Judgement::Entails(d.ctx.clone(), goal));
    }

    fn sub(&mut self, ctx: &ConstraintSet, d: &Derivation, path: &Path, label: &str, s: impl Into<Type>, t: impl Into<Type>) {
        let j = Judgement::Subtype {
            ctx: ctx.clone(),
            sub: s.into(),
            sup: t.into(),
            precise: self.precise,
        };
        self.push(path, d.rule, label, j);
    }

    fn defined_context(&mut self, d: &Derivation, path: &Path, except: Option<usize>) {
        for (slot, name, m) in d.context.entries() {
            if Some(slot) != except {
                self.push(
                    path,
                    d.rule,
                    format!("↓Γ({name})"),
                    Judgement::WellDefined(d.ctx.clone(), m.clone().into()),
                );
            }
        }
    }

    fn node(&mut self, d: &Derivation, path: &Path) -> Result<(), StructuralError> {
        let start = self.out.len();
        self.scope_checks(d, path)?;
        match d.rule {
            Rule::V => self.rule_v(d, path)?,
            Rule::N => self.rule_n(d, path)?,
            Rule::L => self.rule_l(d, path)?,
            Rule::S | Rule::P => self.rule_sp(d, path)?,
            Rule::A => self.rule_a(d, path)?,
            Rule::F => self.rule_f(d, path)?,
            Rule::R => self.rule_r(d, path)?,
        }
        for p in &self.out[start..] {
            let (vars, terms) = judgement_parts(&p.judgement);
            let declared = p.judgement.context().var_set();
            if let Some(v) = vars.iter().find(|v| !declared.contains(*v)) {
                return Err(StructuralError::new(
                    path,
                    format!("{}: index variable `{v}` is not declared", p.label),
                ));
            }
            for t in terms {
                self.program
                    .signature()
                    .check_term(t)
                    .map_err(|e| StructuralError::new(path, format!("{}: {e}", p.label)))?;
            }
        }
        for (k, p) in d.premises.iter().enumerate() {
            self.node(p, &path.child(k))?;
        }
        Ok(())
    }

    /// Everything written at the node mentions only declared variables and
    /// known symbols.
    fn scope_checks(&self, d: &Derivation, path: &Path) -> Result<(), StructuralError> {
        let declared = d.ctx.var_set();
        let mut vars = d.weight.free_vars();
        vars.extend(d.ty.free_vars());
        let mut terms: Vec<&IndexTerm> = vec![&d.weight];
        terms.extend(d.ty.index_terms());
        for c in &d.ctx.constraints {
            vars.extend(c.free_vars());
            terms.push(&c.lhs);
            terms.push(&c.rhs);
        }
        for (_, _, m) in d.context.entries() {
            vars.extend(m.free_vars());
            terms.extend(m.index_terms());
        }
        if let Some(r) = &d.annotations.rec {
            vars.extend(r.l.free_vars());
            vars.extend(r.m.free_vars());
        }
        if let Some(v) = vars.iter().find(|v| !declared.contains(*v)) {
            return Err(StructuralError::new(path, format!("index variable `{v}` is not declared in φ")));
        }
        for t in terms {
            self.program
                .signature()
                .check_term(t)
                .map_err(|e| StructuralError::new(path, e.to_string()))?;
        }
        Ok(())
    }

    fn same_frame(&self, d: &Derivation, p: &Derivation, expected: &ConstraintSet, path: &Path, k: usize) -> Result<(), StructuralError> {
        if p.ctx.same_as(expected) {
            Ok(())
        } else {
            Err(StructuralError::new(
                path,
                format!("rule {}: premise {k} must be under `{expected}`, found `{}`", d.rule, p.ctx),
            ))
        }
    }

    fn same_context(&self, d: &Derivation, got: &TypingContext, expected: &TypingContext, path: &Path, k: usize) -> Result<(), StructuralError> {
        if got.same_as(expected) {
            Ok(())
        } else {
            Err(StructuralError::new(
                path,
                format!("rule {}: premise {k} must have context `{expected}`, found `{got}`", d.rule),
            ))
        }
    }

    fn same_weight(&self, d: &Derivation, got: &IndexTerm, expected: &IndexTerm, path: &Path, what: &str) -> Result<(), StructuralError> {
        if got.alpha_eq(expected) {
            Ok(())
        } else {
            Err(StructuralError::new(path, format!("rule {}: {what} must be {expected}, found {got}", d.rule)))
        }
    }

    fn same_type(&self, d: &Derivation, got: &BasicType, expected: &BasicType, path: &Path, what: &str) -> Result<(), StructuralError> {
        if got.alpha_eq(expected) {
            Ok(())
        } else {
            Err(StructuralError::new(path, format!("rule {}: {what} must be {expected}, found {got}", d.rule)))
        }
    }

    fn rule_v(&mut self, d: &Derivation, path: &Path) -> Result<(), StructuralError> {
        let Term::Var(x) = d.subject else { unreachable!("rule follows the subject") };
        let name = d.context.name(x).to_string();
        let m = d
            .context
            .get(x)
            .ok_or_else(|| StructuralError::new(path, format!("`{name}` has no type in the context")))?
            .clone();
        self.le(d, path, "0 ≤ J", lit(0), d.weight.clone());
        self.le(d, path, "1 ≤ I", lit(1), m.bound.clone());
        self.sub(&d.ctx, d, path, "σ[a:=0] ⊑ τ", m.instance(&lit(0)), d.ty.clone());
        self.push(
            path,
            d.rule,
            format!("↓Γ({name})"),
            Judgement::WellDefined(d.ctx.clone(), m.into()),
        );
        self.defined_context(d, path, Some(x));
        Ok(())
    }

    fn rule_n(&mut self, d: &Derivation, path: &Path) -> Result<(), StructuralError> {
        let Term::Const(n) = d.subject else { unreachable!("rule follows the subject") };
        let (i, j) = nat_bounds(&d.ty, path, "a numeral")?;
        let (i, j) = (i.clone(), j.clone());
        self.le(d, path, "K ≥ 0", lit(0), d.weight.clone());
        self.le(d, path, "I ≤ n", i, lit(n));
        self.le(d, path, "n ≤ J", lit(n), j);
        self.defined_context(d, path, None);
        Ok(())
    }

    fn rule_l(&mut self, d: &Derivation, path: &Path) -> Result<(), StructuralError> {
        let Term::Lam(binder, _) = &d.subject else { unreachable!("rule follows the subject") };
        let BasicType::Arrow(m, tau) = &d.ty else {
            return Err(StructuralError::new(path, format!("an abstraction needs an arrow type, found {}", d.ty)));
        };
        let p = &d.premises[0];
        self.same_frame(d, p, &d.ctx, path, 0)?;
        let expected = d.context.extended(&binder.name, Some((**m).clone()));
        self.same_context(d, &p.context, &expected, path, 0)?;
        self.same_weight(d, &p.weight, &d.weight, path, "the body's weight")?;
        self.same_type(d, &p.ty, tau, path, "the body's type")
    }

    fn rule_sp(&mut self, d: &Derivation, path: &Path) -> Result<(), StructuralError> {
        let p = &d.premises[0];
        self.same_frame(d, p, &d.ctx, path, 0)?;
        self.same_context(d, &p.context, &d.context, path, 0)?;
        self.same_weight(d, &p.weight, &d.weight, path, "the premise's weight")?;
        let (i, j) = nat_bounds(&p.ty, path, "the premise")?;
        nat_bounds(&d.ty, path, "the conclusion")?;
        let (shifted, label) = if d.rule == Rule::S {
            (nat(i.clone() + lit(1), j.clone() + lit(1)), "Nat[I+1, J+1] ⊑ Nat[K, H]")
        } else {
            (nat(i.clone() - lit(1), j.clone() - lit(1)), "Nat[I∸1, J∸1] ⊑ Nat[K, H]")
        };
        self.sub(&d.ctx, d, path, label, shifted, d.ty.clone());
        Ok(())
    }

    /// `Γ(x) ⊎ Δ(x)`, through the `usum` witness when both are present.
    fn binary_sum(&mut self, d: &Derivation, path: &Path, slot: usize, l: Option<&ModalType>, r: Option<&ModalType>) -> Result<Option<ModalType>, StructuralError> {
        let name = d.context.name(slot).to_string();
        let witness = d.annotations.usum.get(&slot);
        match (l, r, witness) {
            (Some(l), Some(r), Some(w)) => {
                let (total, checks) = sum_modal_checks(l, r, (&w.var, &w.body), &d.ctx)
                    .map_err(|e| shape_error(path, &name, e))?;
                for j in checks {
                    self.push(path, d.rule, format!("⊎ witness ({name})"), j);
                }
                Ok(Some(total))
            }
            (Some(_), Some(_), None) => Err(StructuralError::new(
                path,
                format!("`{name}` occurs in two premises: a `(usum {name} ...)` witness is needed"),
            )),
            (_, _, Some(_)) => Err(StructuralError::new(
                path,
                format!("the `usum` witness for `{name}` is not used: it occurs in at most one premise"),
            )),
            (l, r, None) => Ok(l.or(r).cloned()),
        }
    }

    /// `Σ_{binder < bound} Δ(x)` through the `bsum` witness.
    fn bounded_sum(&mut self, d: &Derivation, path: &Path, slot: usize, binder: &str, bound: &IndexTerm, delta: Option<&ModalType>) -> Result<Option<ModalType>, StructuralError> {
        let name = d.context.name(slot).to_string();
        match (delta, d.annotations.bsum.get(&slot)) {
            (Some(m), Some(w)) => {
                let (total, checks) = bounded_sum_checks(binder, bound, m, (&w.var, &w.body, &w.width), &d.ctx)
                    .map_err(|e| shape_error(path, &name, e))?;
                for j in checks {
                    self.push(path, d.rule, format!("Σ witness ({name})"), j);
                }
                Ok(Some(total))
            }
            (Some(_), None) => Err(StructuralError::new(
                path,
                format!("`{name}` is used under `{binder} < {bound}`: a `(bsum {name} ...)` witness is needed"),
            )),
            (None, Some(_)) => Err(StructuralError::new(
                path,
                format!("the `bsum` witness for `{name}` is not used"),
            )),
            (None, None) => Ok(None),
        }
    }

    /// `Σ(x) ⊑ total`, an absent side standing for a zero-width entry.
    fn context_sub(&mut self, d: &Derivation, path: &Path, slot: usize, label: &str, total: Option<ModalType>) {
        let name = d.context.name(slot);
        let label = format!("{label} ({name})");
        match (d.context.present(slot), total) {
            (None, None) => {}
            (Some(s), Some(t)) => self.sub(&d.ctx, d, path, &label, s.clone(), t),
            (Some(s), None) => self.sub(&d.ctx, d, path, &label, s.clone(), empty_like(s)),
            (None, Some(t)) => self.sub(&d.ctx, d, path, &label, empty_like(&t), t),
        }
    }

    fn rule_a(&mut self, d: &Derivation, path: &Path) -> Result<(), StructuralError> {
        let (p1, p2) = (&d.premises[0], &d.premises[1]);
        let BasicType::Arrow(m, tau) = &p1.ty else {
            return Err(StructuralError::new(path, format!("the function premise needs an arrow type, found {}", p1.ty)));
        };
        self.same_frame(d, p1, &d.ctx, path, 0)?;
        self.same_type(d, tau, &d.ty, path, "the codomain of the function premise")?;
        let outer = d.ctx.var_set();
        let fresh: Vec<&String> = p2.ctx.vars.iter().filter(|v| !outer.contains(*v)).collect();
        let [a] = fresh.as_slice() else {
            return Err(StructuralError::new(
                path,
                format!("the argument premise must declare exactly one index variable beyond `{}`, the binder of {m}", d.ctx),
            ));
        };
        let a = a.to_string();
        let m = m.rename(&a);
        let i = m.bound.clone();
        let expected = d.ctx.extend(&a, Constraint::lt(var(&a), i.clone()));
        self.same_frame(d, p2, &expected, path, 1)?;
        self.same_type(d, &p2.ty, &m.body, path, "the argument's type")?;

        for slot in 0..d.context.scope_len() {
            let delta = self.bounded_sum(d, path, slot, &a, &i, p2.context.present(slot))?;
            let total = self.binary_sum(d, path, slot, p1.context.present(slot), delta.as_ref())?;
            self.context_sub(d, path, slot, "Σ ⊑ Γ ⊎ Σ_{a<I} Δ", total);
        }
        let cost = p1.weight.clone() + i.clone() + sum(&a, i, p2.weight.clone());
        self.le(d, path, "H ≥ J + I + Σ_{a<I} K", cost, d.weight.clone());
        Ok(())
    }

    fn rule_f(&mut self, d: &Derivation, path: &Path) -> Result<(), StructuralError> {
        let (p1, p2, p3) = (&d.premises[0], &d.premises[1], &d.premises[2]);
        let (i, j) = nat_bounds(&p1.ty, path, "the scrutinee")?;
        self.same_frame(d, p1, &d.ctx, path, 0)?;
        self.same_frame(d, p2, &d.ctx.assume(Constraint::le(i.clone(), lit(0))), path, 1)?;
        self.same_frame(d, p3, &d.ctx.assume(Constraint::le(lit(1), j.clone())), path, 2)?;
        self.same_context(d, &p3.context, &p2.context, path, 2)?;
        self.same_weight(d, &p3.weight, &p2.weight, path, "the weight of the second branch")?;
        self.same_type(d, &p2.ty, &d.ty, path, "the type of the first branch")?;
        self.same_type(d, &p3.ty, &d.ty, path, "the type of the second branch")?;
        for slot in 0..d.context.scope_len() {
            let total = self.binary_sum(d, path, slot, p1.context.present(slot), p2.context.present(slot))?;
            self.context_sub(d, path, slot, "Σ ⊑ Γ ⊎ Δ", total);
        }
        self.le(d, path, "L ≥ K + H", p1.weight.clone() + p2.weight.clone(), d.weight.clone());
        Ok(())
    }

    fn rule_r(&mut self, d: &Derivation, path: &Path) -> Result<(), StructuralError> {
        let r = d.annotations.rec.as_ref().expect("rule R annotations are required by the parser");
        let p = &d.premises[0];
        let (a, b) = (r.a.as_str(), r.b.as_str());
        if d.ctx.has_var(b) || d.ctx.has_var(a) || a == b {
            return Err(StructuralError::new(
                path,
                format!("the binders `{b}` and `{a}` must be distinct and not declared in φ"),
            ));
        }
        self.same_frame(d, p, &d.ctx.extend(b, Constraint::lt(var(b), r.l.clone())), path, 0)?;
        let declared = modal(a, r.i.clone(), r.sigma.clone());
        let matches = match p.context.present(0) {
            Some(m) => m.alpha_eq(&declared),
            None => r.i == lit(0),
        };
        if !matches {
            let found = p.context.get(0).map_or("nothing".to_string(), ToString::to_string);
            return Err(StructuralError::new(
                path,
                format!("rule R: the recursive variable must have type {declared} in the premise, found {found}"),
            ));
        }
        self.same_weight(d, &p.weight, &r.k, path, "the premise's weight K")?;
        self.same_type(d, &p.ty, &r.tau, path, "the premise's type τ")?;

        self.sub(&d.ctx, d, path, "τ[b:=0] ⊑ μ", r.tau.subst(b, &lit(0)), d.ty.clone());
        let inner = d
            .ctx
            .extend(b, Constraint::lt(var(b), r.l.clone()))
            .extend(a, Constraint::lt(var(a), r.i.clone()));
        let next = forest(b, var(b) + lit(1), var(a), r.i.clone()) + var(b) + lit(1);
        self.sub(&inner, d, path, "τ[b:=△_b(b+1,a,I)+b+1] ⊑ σ", r.tau.subst(b, &next), r.sigma.clone());

        let outer = p.context.outer();
        for slot in 0..d.context.scope_len() {
            let total = self.bounded_sum(d, path, slot, b, &r.l, outer.present(slot))?;
            self.context_sub(d, path, slot, "Σ ⊑ Σ_{b<L} Γ", total);
        }
        let nodes = forest(b, lit(0), lit(1), r.i.clone());
        self.le(d, path, "△_b(0,1,I) ≤ L", nodes.clone(), r.l.clone());
        self.le(d, path, "△_b(0,1,I) ≤ M", nodes, r.m.clone());
        let cost = (r.m.clone() - lit(1)) + sum(b, r.l.clone(), r.k.clone());
        self.le(d, path, "N ≥ M∸1 + Σ_{b<L} K", cost, d.weight.clone());
        Ok(())
    }
}

fn shape_error(path: &Path, name: &str, e: ShapeError) -> StructuralError {
    StructuralError::new(path, format!("the sum for `{name}` cannot be formed: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::Assignment;

    const DBL: &str = include_str!("../../data/dbl.deriv");
    const DBL_WEIGHT_A: &str = include_str!("../../data/dbl_weight_a.deriv");
    const ARITH: &str = include_str!("../../data/arith.eqs");

    fn arith() -> EquationalProgram {
        ARITH.parse().unwrap()
    }

    fn run(text: &str, bound: u64) -> Result<CheckReport, StructuralError> {
        let d: Derivation = text.parse().unwrap();
        check(&d, &arith(), bound, crate::index::DEFAULT_FUEL, false)
    }

    #[test]
    fn numeral_leaf() {
        let d: Derivation = "(derivation (subject \"3\") (root (N (weight \"0\") (type \"Nat[3, 3]\"))))"
            .parse()
            .unwrap();
        let r = check(&d, &EquationalProgram::empty(), 8, 1000, false).unwrap();
        assert!(r.overall.is_verified());
        let labels: Vec<_> = r.obligations.iter().map(|o| o.label.as_str()).collect();
        assert_eq!(labels, ["K ≥ 0", "I ≤ n", "n ≤ J"]);
    }

    #[test]
    fn numeral_outside_its_interval() {
        let d: Derivation = "(derivation (subject \"3\") (root (N (weight \"0\") (type \"Nat[4, 9]\"))))"
            .parse()
            .unwrap();
        let r = check(&d, &EquationalProgram::empty(), 8, 1000, false).unwrap();
        assert!(r.overall.is_refuted());
        assert_eq!(r.first_refuted().unwrap().label, "I ≤ n");
    }

    #[test]
    fn golden_dbl_is_verified() {
        let r = run(DBL, 6).unwrap();
        for o in &r.obligations {
            assert!(o.verdict.is_verified(), "{} {}: {} -- {}", o.path, o.label, o.verdict, o.judgement);
        }
        assert_eq!(r.overall, Verdict::Verified { bound: 6 });
    }

    #[test]
    fn literal_dbl_fails_at_the_application() {
        let r = run(DBL_WEIGHT_A, 6).unwrap();
        let o = r.first_refuted().expect("the literal weights are too small");
        assert_eq!(o.rule, Rule::A);
        assert_eq!(o.label, "H ≥ J + I + Σ_{a<I} K");
    }

    #[test]
    fn lowered_root_weight_is_refuted_with_a_witness() {
        let text = DBL.replacen("(weight \"a + sum(b < a + 1, a - b)\")", "(weight \"a + sum(b < a + 1, a - b) - 1\")", 2);
        let r = run(&text, 6).unwrap();
        let o = r.first_refuted().unwrap();
        assert_eq!(o.path, Path::root());
        // at a = 0 both sides are 0; the first assignment that separates them
        assert_eq!(o.verdict, Verdict::Refuted { witness: Assignment::from_pairs([("a", 1)]) });
    }

    #[test]
    fn unknown_symbol_is_structural() {
        let text = DBL.replace("gt(a, b)", "greater(a, b)");
        let e = run(&text, 6).unwrap_err();
        assert!(e.message.contains("greater"), "{e}");
    }

    #[test]
    fn report_order_is_deterministic() {
        let a = run(DBL, 4).unwrap();
        let b = run(DBL, 4).unwrap();
        assert_eq!(a, b);
        assert!(a.obligations.windows(2).all(|w| w[0].path <= w[1].path));
    }

    #[test]
    fn precise_mode_turns_inequalities_into_equations() {
        // the golden derivation has no slack at all
        let d: Derivation = DBL.parse().unwrap();
        let r = check(&d, &arith(), 4, crate::index::DEFAULT_FUEL, true).unwrap();
        assert!(r.precise);
        assert!(r.overall.is_verified());
        let loose: Derivation = "(derivation (subject \"3\") (root (N (weight \"0\") (type \"Nat[0, 9]\"))))".parse().unwrap();
        assert!(check(&loose, &arith(), 4, 1000, false).unwrap().overall.is_verified());
        let r = check(&loose, &arith(), 4, 1000, true).unwrap();
        assert_eq!(r.first_refuted().unwrap().label, "I ≤ n");
    }
}
