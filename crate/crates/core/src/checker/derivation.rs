//! Derivation trees and their file format.
//!
//! ```text
//! file  ::= (derivation (subject "t")? (weight "I")? (type "σ")? (root node))
//! node  ::= (RULE (phi a ...) (constraints "c" ...) (context (x "A") ...)
//!                 (weight "I") (type "σ") (annots ann ...) (premises node ...))
//! RULE  ::= V | L | A | S | N | P | F | R
//! ann   ::= (usum x c "μ")           ; Γ(x) ⊎ Δ(x) = [c < I + J] μ
//!         | (bsum x c "σ" "J")       ; Σ_{a<I} Δ(x) = [c < Σ_{a<I} J] σ
//!         | (b NAME) | (a NAME)      ; rule R: the two index binders
//!         | (I "..") | (K "..") | (L "..") | (M "..")
//!         | (sigma "..") | (tau "..")
//! ```
//!
//! Only `weight` and `type` are required in a node; the other keys default
//! to empty. Context entries are named after the term variables in scope and
//! refer to the innermost binder of that name. Entries of the form
//! `[a < 0] σ` may be left out.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::sexp::{parse_sexp, Sexp};
use crate::index::{Constraint, ConstraintSet, IndexTerm};
use crate::pcf::{self, Term};
use crate::syntax::ParseError;
use crate::types::{BasicType, ModalType};

/// Position of a node: the premise indices on the way down from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }

    pub fn child(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        v.push(k);
        Path(v)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for k in &self.0 {
            write!(f, ".{k}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {message}")]
pub struct StructuralError {
    pub path: Path,
    pub message: String,
}

impl StructuralError {
    pub fn new(path: &Path, message: impl Into<String>) -> Self {
        StructuralError {
            path: path.clone(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("syntax error at {0}")]
    Syntax(#[from] ParseError),
    #[error("malformed derivation at {0}")]
    Structural(#[from] StructuralError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    V,
    L,
    A,
    S,
    N,
    P,
    F,
    R,
}

impl Rule {
    /// The rule that types terms with this head constructor.
    pub fn for_term(t: &Term) -> Rule {
        match t {
            Term::Var(_) => Rule::V,
            Term::Lam(..) => Rule::L,
            Term::App(..) => Rule::A,
            Term::Succ(_) => Rule::S,
            Term::Const(_) => Rule::N,
            Term::Pred(_) => Rule::P,
            Term::IfZ(..) => Rule::F,
            Term::Fix(..) => Rule::R,
        }
    }

    pub fn premise_count(self) -> usize {
        match self {
            Rule::V | Rule::N => 0,
            Rule::L | Rule::S | Rule::P | Rule::R => 1,
            Rule::A => 2,
            Rule::F => 3,
        }
    }

    fn allowed_annotations(self) -> &'static [&'static str] {
        match self {
            Rule::A => &["usum", "bsum"],
            Rule::F => &["usum"],
            Rule::R => &["bsum", "b", "a", "I", "K", "L", "M", "sigma", "tau"],
            _ => &[],
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "V" => Rule::V,
            "L" => Rule::L,
            "A" => Rule::A,
            "S" => Rule::S,
            "N" => Rule::N,
            "P" => Rule::P,
            "F" => Rule::F,
            "R" => Rule::R,
            _ => return Err(format!("unknown rule `{s}`")),
        })
    }
}

/// `Γ`: a modal type for some of the term variables in scope, indexed like
/// de Bruijn variables (slot 0 is the innermost binder).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypingContext {
    names: Vec<String>,
    slots: Vec<Option<ModalType>>,
}

impl TypingContext {
    /// No types assigned to the variables `names` (innermost first).
    pub fn empty(names: Vec<String>) -> Self {
        let slots = vec![None; names.len()];
        TypingContext { names, slots }
    }

    pub fn scope_len(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, slot: usize) -> &str {
        &self.names[slot]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// The innermost slot called `name`.
    pub fn resolve(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn get(&self, slot: usize) -> Option<&ModalType> {
        self.slots.get(slot).and_then(Option::as_ref)
    }

    /// The entry of `slot` unless it is missing or has the literal bound 0.
    pub fn present(&self, slot: usize) -> Option<&ModalType> {
        self.get(slot).filter(|m| m.bound != IndexTerm::Lit(0))
    }

    pub fn set(&mut self, slot: usize, ty: Option<ModalType>) {
        self.slots[slot] = ty;
    }

    /// `Γ, x : A`.
    pub fn extended(&self, name: &str, ty: Option<ModalType>) -> Self {
        let mut out = self.clone();
        out.names.insert(0, name.to_string());
        out.slots.insert(0, ty);
        out
    }

    /// The context without its innermost slot.
    pub fn outer(&self) -> Self {
        TypingContext {
            names: self.names[1..].to_vec(),
            slots: self.slots[1..].to_vec(),
        }
    }

    /// `(slot, name, type)` for every assigned variable, innermost first.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &str, &ModalType)> {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(k, s)| s.as_ref().map(|m| (k, self.names[k].as_str(), m)))
    }

    /// Slot-wise alpha-equality, a zero-width entry being the same as none.
    pub fn same_as(&self, other: &TypingContext) -> bool {
        self.scope_len() == other.scope_len()
            && (0..self.scope_len()).all(|k| match (self.present(k), other.present(k)) {
                (None, None) => true,
                (Some(a), Some(b)) => a.alpha_eq(b),
                _ => false,
            })
    }
}

impl fmt::Display for TypingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<_> = self.entries().collect();
        if entries.is_empty() {
            return f.write_str("∅");
        }
        for (k, (_, name, ty)) in entries.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name} : {ty}")?;
        }
        Ok(())
    }
}

/// Witness `(c, μ)` for a binary sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnarySumWitness {
    pub var: String,
    pub body: BasicType,
}

/// Witness `(c, σ, J)` for a bounded sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedSumWitness {
    pub var: String,
    pub body: BasicType,
    pub width: IndexTerm,
}

/// The index annotations of rule R, named as in
/// `φ, b; Φ, b < L; Γ, x : [a < I] σ ⊢_K t : τ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecAnnotations {
    pub b: String,
    pub a: String,
    pub i: IndexTerm,
    pub k: IndexTerm,
    pub l: IndexTerm,
    pub m: IndexTerm,
    pub sigma: BasicType,
    pub tau: BasicType,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Annotations {
    /// By context slot.
    pub usum: BTreeMap<usize, UnarySumWitness>,
    pub bsum: BTreeMap<usize, BoundedSumWitness>,
    pub rec: Option<RecAnnotations>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    /// `φ; Φ`.
    pub ctx: ConstraintSet,
    pub context: TypingContext,
    pub subject: Term,
    pub weight: IndexTerm,
    pub ty: BasicType,
    pub annotations: Annotations,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Derivation::node_count).sum::<usize>()
    }

    /// Pre-order traversal with paths.
    pub fn nodes(&self) -> Vec<(Path, &Derivation)> {
        let mut out = Vec::new();
        let mut todo = vec![(Path::root(), self)];
        while let Some((p, d)) = todo.pop() {
            for (k, q) in d.premises.iter().enumerate().rev() {
                todo.push((p.child(k), q));
            }
            out.push((p, d));
        }
        out
    }

    pub fn at(&self, path: &Path) -> Option<&Derivation> {
        let mut d = self;
        for &k in &path.0 {
            d = d.premises.get(k)?;
        }
        Some(d)
    }

    pub fn at_mut(&mut self, path: &Path) -> Option<&mut Derivation> {
        let mut d = self;
        for &k in &path.0 {
            d = d.premises.get_mut(k)?;
        }
        Some(d)
    }

    /// Builds the derivation for `subject` from a node expression.
    pub fn from_sexp(node: &Sexp, subject: &Term) -> Result<Derivation, DerivationError> {
        if !subject.is_closed() {
            return Err(StructuralError::new(&Path::root(), "the subject must be a closed term").into());
        }
        elaborate(node, subject, &[], &Path::root())
    }

    /// Reads a derivation file. The subject is taken from the file's
    /// `subject` entry or from `program`; when both are given they must agree.
    pub fn parse(text: &str, program: Option<&Term>) -> Result<Derivation, DerivationError> {
        let top = parse_sexp(text)?;
        let root_path = Path::root();
        let (head, fields) = top
            .as_form()
            .ok_or_else(|| top.error("expected `(derivation ...)`"))?;
        if head != "derivation" {
            return Err(top.error("expected `(derivation ...)`").into());
        }
        let fields = Fields::collect(fields, &["subject", "weight", "type", "root"])?;
        let subject = match (fields.one("subject")?, program) {
            (Some(s), program) => {
                let t = embedded(s, pcf::parse)?;
                if let Some(p) = program {
                    if *p != t {
                        return Err(StructuralError::new(
                            &root_path,
                            format!("the derivation is for `{t}`, not for the program `{p}`"),
                        )
                        .into());
                    }
                }
                t
            }
            (None, Some(p)) => p.clone(),
            (None, None) => {
                return Err(StructuralError::new(&root_path, "no subject: give `(subject ..)` or a program").into());
            }
        };
        let root = fields.one("root")?.ok_or_else(|| top.error("missing `(root ...)`"))?;
        let d = Derivation::from_sexp(root, &subject)?;
        if let Some(w) = fields.one("weight")? {
            let w: IndexTerm = embedded(w, str::parse)?;
            if !w.alpha_eq(&d.weight) {
                return Err(StructuralError::new(
                    &root_path,
                    format!("header weight {w} differs from the root weight {}", d.weight),
                )
                .into());
            }
        }
        if let Some(t) = fields.one("type")? {
            let t: BasicType = embedded(t, str::parse)?;
            if !t.alpha_eq(&d.ty) {
                return Err(StructuralError::new(
                    &root_path,
                    format!("header type {t} differs from the root type {}", d.ty),
                )
                .into());
            }
        }
        Ok(d)
    }

    /// The file text for this derivation, subject and root bounds included.
    pub fn to_file(&self) -> String {
        let mut out = String::from("(derivation\n");
        out.push_str(&format!("  (subject {})\n", quote(&self.subject.to_string())));
        out.push_str(&format!("  (weight {})\n", quote(&self.weight.to_string())));
        out.push_str(&format!("  (type {})\n", quote(&self.ty.to_string())));
        out.push_str("  (root\n");
        self.write_node(&mut out, 4);
        out.push_str("))\n");
        out
    }

    fn write_node(&self, out: &mut String, indent: usize) {
        let pad = " ".repeat(indent);
        out.push_str(&format!("{pad}({}", self.rule));
        out.push_str(&format!(" (phi{})", self.ctx.vars.iter().map(|v| format!(" {v}")).collect::<String>()));
        if !self.ctx.constraints.is_empty() {
            let cs: String = self.ctx.constraints.iter().map(|c| format!(" {}", quote(&c.to_string()))).collect();
            out.push_str(&format!("\n{pad} (constraints{cs})"));
        }
        let entries: Vec<_> = self.context.entries().collect();
        if !entries.is_empty() {
            let cs: String = entries
                .iter()
                .rev()
                .map(|(_, n, t)| format!(" ({n} {})", quote(&t.to_string())))
                .collect();
            out.push_str(&format!("\n{pad} (context{cs})"));
        }
        out.push_str(&format!("\n{pad} (weight {})", quote(&self.weight.to_string())));
        out.push_str(&format!("\n{pad} (type {})", quote(&self.ty.to_string())));
        let mut anns = Vec::new();
        for (slot, w) in &self.annotations.usum {
            anns.push(format!("(usum {} {} {})", self.context.name(*slot), w.var, quote(&w.body.to_string())));
        }
        for (slot, w) in &self.annotations.bsum {
            anns.push(format!(
                "(bsum {} {} {} {})",
                self.context.name(*slot),
                w.var,
                quote(&w.body.to_string()),
                quote(&w.width.to_string())
            ));
        }
        if let Some(r) = &self.annotations.rec {
            anns.push(format!("(b {}) (a {})", r.b, r.a));
            for (k, v) in [("I", &r.i), ("K", &r.k), ("L", &r.l), ("M", &r.m)] {
                anns.push(format!("({k} {})", quote(&v.to_string())));
            }
            anns.push(format!("(sigma {})", quote(&r.sigma.to_string())));
            anns.push(format!("(tau {})", quote(&r.tau.to_string())));
        }
        if !anns.is_empty() {
            out.push_str(&format!("\n{pad} (annots {})", anns.join(" ")));
        }
        if !self.premises.is_empty() {
            out.push_str(&format!("\n{pad} (premises\n"));
            for (k, p) in self.premises.iter().enumerate() {
                if k > 0 {
                    out.push('\n');
                }
                p.write_node(out, indent + 2);
            }
            out.push(')');
        }
        out.push(')');
    }
}

impl FromStr for Derivation {
    type Err = DerivationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Derivation::parse(s, None)
    }
}

fn quote(s: &str) -> String {
    Sexp::Str {
        text: s.to_string(),
        line: 0,
        col: 0,
    }
    .to_string()
}

/// Parses the text of a string atom, reporting errors at the atom.
fn embedded<T>(e: &Sexp, parse: impl FnOnce(&str) -> Result<T, ParseError>) -> Result<T, ParseError> {
    let text = e.as_text().ok_or_else(|| e.error("expected a string"))?;
    parse(text).map_err(|inner| e.error(format!("in {}: {inner}", quote(text))))
}

fn symbol(e: &Sexp) -> Result<&str, ParseError> {
    e.as_text().ok_or_else(|| e.error("expected a name"))
}

/// The `(key ...)` entries of a form, each key at most once.
struct Fields<'s> {
    map: BTreeMap<&'s str, (&'s Sexp, &'s [Sexp])>,
}

impl<'s> Fields<'s> {
    fn collect(items: &'s [Sexp], allowed: &[&str]) -> Result<Self, ParseError> {
        let mut map = BTreeMap::new();
        for item in items {
            let (key, rest) = item.as_form().ok_or_else(|| item.error("expected `(key ...)`"))?;
            if !allowed.contains(&key) {
                return Err(item.error(format!("unknown key `{key}`")));
            }
            if map.insert(key, (item, rest)).is_some() {
                return Err(item.error(format!("duplicate key `{key}`")));
            }
        }
        Ok(Fields { map })
    }

    fn all(&self, key: &str) -> &'s [Sexp] {
        self.map.get(key).map(|(_, r)| *r).unwrap_or(&[])
    }

    /// The single argument of `(key x)`, if the key is present.
    fn one(&self, key: &str) -> Result<Option<&'s Sexp>, ParseError> {
        match self.map.get(key) {
            None => Ok(None),
            Some((_, [x])) => Ok(Some(x)),
            Some((item, _)) => Err(item.error(format!("`{key}` takes exactly one argument"))),
        }
    }

    fn required(&self, key: &str, at: &Sexp) -> Result<&'s Sexp, ParseError> {
        self.one(key)?.ok_or_else(|| at.error(format!("missing `({key} ...)`")))
    }
}

const NODE_KEYS: &[&str] = &["phi", "constraints", "context", "weight", "type", "annots", "premises"];

fn elaborate(node: &Sexp, subject: &Term, scope: &[String], path: &Path) -> Result<Derivation, DerivationError> {
    let (tag, items) = node.as_form().ok_or_else(|| node.error("expected a derivation node `(RULE ...)`"))?;
    let rule: Rule = tag.parse().map_err(|m: String| node.error(m))?;
    let expected = Rule::for_term(subject);
    if rule != expected {
        return Err(StructuralError::new(
            path,
            format!("rule {rule} cannot type `{subject}`, which needs rule {expected}"),
        )
        .into());
    }
    let fields = Fields::collect(items, NODE_KEYS)?;

    let mut vars = Vec::new();
    for v in fields.all("phi") {
        let name = symbol(v)?;
        if vars.iter().any(|w| w == name) {
            return Err(v.error(format!("index variable `{name}` declared twice")).into());
        }
        vars.push(name.to_string());
    }
    let mut ctx = ConstraintSet {
        vars,
        constraints: Vec::new(),
    };
    for c in fields.all("constraints") {
        ctx.constraints.push(embedded(c, Constraint::from_str)?);
    }

    let mut context = TypingContext::empty(scope.to_vec());
    for entry in fields.all("context") {
        let parts = entry.as_list().ok_or_else(|| entry.error("expected `(name \"type\")`"))?;
        let [name, ty] = parts else {
            return Err(entry.error("expected `(name \"type\")`").into());
        };
        let name = symbol(name)?;
        let slot = context.resolve(name).ok_or_else(|| {
            StructuralError::new(path, format!("`{name}` is not a variable in scope at `{subject}`"))
        })?;
        if context.get(slot).is_some() {
            return Err(entry.error(format!("`{name}` is given two types")).into());
        }
        context.set(slot, Some(embedded(ty, ModalType::from_str)?));
    }

    let weight: IndexTerm = embedded(fields.required("weight", node)?, str::parse)?;
    let ty: BasicType = embedded(fields.required("type", node)?, str::parse)?;
    let annotations = annotations(rule, fields.all("annots"), &context, path)?;

    let premise_nodes = fields.all("premises");
    if premise_nodes.len() != rule.premise_count() {
        return Err(StructuralError::new(
            path,
            format!(
                "rule {rule} has {} premise(s), found {}",
                rule.premise_count(),
                premise_nodes.len()
            ),
        )
        .into());
    }
    let mut premises = Vec::new();
    for (k, (p, sub)) in premise_nodes.iter().zip(premise_subjects(subject)).enumerate() {
        let inner_scope = match subject {
            Term::Lam(b, _) | Term::Fix(b, _) => {
                let mut s = vec![b.name.clone()];
                s.extend_from_slice(scope);
                s
            }
            _ => scope.to_vec(),
        };
        premises.push(elaborate(p, sub, &inner_scope, &path.child(k))?);
    }

    Ok(Derivation {
        rule,
        ctx,
        context,
        subject: subject.clone(),
        weight,
        ty,
        annotations,
        premises,
    })
}

/// The subjects of the premises, in the order the rules list them.
fn premise_subjects(t: &Term) -> Vec<&Term> {
    match t {
        Term::Var(_) | Term::Const(_) => vec![],
        Term::Succ(u) | Term::Pred(u) | Term::Lam(_, u) | Term::Fix(_, u) => vec![u],
        Term::App(f, a) => vec![f, a],
        Term::IfZ(c, z, s) => vec![c, z, s],
    }
}

fn annotations(
    rule: Rule,
    items: &[Sexp],
    context: &TypingContext,
    path: &Path,
) -> Result<Annotations, DerivationError> {
    let mut out = Annotations::default();
    let mut singles: BTreeMap<&str, &Sexp> = BTreeMap::new();
    let slot_of = |name: &Sexp| -> Result<usize, DerivationError> {
        let n = symbol(name)?;
        context
            .resolve(n)
            .ok_or_else(|| StructuralError::new(path, format!("sum witness for `{n}`, which is not in scope")).into())
    };
    for item in items {
        let (key, args) = item.as_form().ok_or_else(|| item.error("expected `(key ...)`"))?;
        if !rule.allowed_annotations().contains(&key) {
            return Err(StructuralError::new(path, format!("rule {rule} takes no `{key}` annotation")).into());
        }
        match (key, args) {
            ("usum", [x, c, mu]) => {
                let slot = slot_of(x)?;
                let w = UnarySumWitness {
                    var: symbol(c)?.to_string(),
                    body: embedded(mu, str::parse)?,
                };
                if out.usum.insert(slot, w).is_some() {
                    return Err(item.error("two `usum` witnesses for the same variable").into());
                }
            }
            ("bsum", [x, c, sigma, j]) => {
                let slot = slot_of(x)?;
                let w = BoundedSumWitness {
                    var: symbol(c)?.to_string(),
                    body: embedded(sigma, str::parse)?,
                    width: embedded(j, str::parse)?,
                };
                if out.bsum.insert(slot, w).is_some() {
                    return Err(item.error("two `bsum` witnesses for the same variable").into());
                }
            }
            ("usum", _) => return Err(item.error("expected `(usum x c \"type\")`").into()),
            ("bsum", _) => return Err(item.error("expected `(bsum x c \"type\" \"width\")`").into()),
            (_, [x]) => {
                if singles.insert(key, x).is_some() {
                    return Err(item.error(format!("duplicate annotation `{key}`")).into());
                }
            }
            _ => return Err(item.error(format!("`{key}` takes exactly one argument")).into()),
        }
    }
    if rule == Rule::R {
        let get = |k: &str| {
            singles
                .get(k)
                .copied()
                .ok_or_else(|| StructuralError::new(path, format!("rule R needs the annotation `({k} ..)`")))
        };
        let index = |k: &str| -> Result<IndexTerm, DerivationError> { Ok(embedded(get(k)?, str::parse)?) };
        let basic = |k: &str| -> Result<BasicType, DerivationError> { Ok(embedded(get(k)?, str::parse)?) };
        out.rec = Some(RecAnnotations {
            b: symbol(get("b")?)?.to_string(),
            a: symbol(get("a")?)?.to_string(),
            i: index("I")?,
            k: index("K")?,
            l: index("L")?,
            m: index("M")?,
            sigma: basic("sigma")?,
            tau: basic("tau")?,
        });
    }
    Ok(out)
}
