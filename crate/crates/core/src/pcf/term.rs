use std::fmt;
use std::hash::{Hash, Hasher};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PcfType {
    Nat,
    Arrow(Box<PcfType>, Box<PcfType>),
}

impl PcfType {
    pub fn arrow(dom: PcfType, cod: PcfType) -> PcfType {
        PcfType::Arrow(Box::new(dom), Box::new(cod))
    }
}

impl fmt::Display for PcfType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PcfType::Nat => f.write_str("Nat"),
            PcfType::Arrow(d, c) => match **d {
                PcfType::Nat => write!(f, "Nat -> {c}"),
                PcfType::Arrow(..) => write!(f, "({d}) -> {c}"),
            },
        }
    }
}

/// A lambda or fix binder. The name is only a printing hint and is ignored
/// by equality, so alpha-equivalent terms compare equal.
#[derive(Debug, Clone)]
pub struct Binder {
    pub name: String,
    pub ty: Option<PcfType>,
}

impl Binder {
    pub fn new(name: &str, ty: Option<PcfType>) -> Self {
        Binder {
            name: name.to_string(),
            ty,
        }
    }

    pub fn untyped(name: &str) -> Self {
        Self::new(name, None)
    }

    pub fn typed(name: &str, ty: PcfType) -> Self {
        Self::new(name, Some(ty))
    }
}

impl PartialEq for Binder {
    fn eq(&self, other: &Self) -> bool {
        self.ty == other.ty
    }
}

impl Eq for Binder {}

impl Hash for Binder {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ty.hash(state);
    }
}

/// PCF terms with de Bruijn indices: `Var(0)` is the nearest enclosing
/// binder.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Const(u64),
    Succ(Box<Term>),
    Pred(Box<Term>),
    Lam(Binder, Box<Term>),
    App(Box<Term>, Box<Term>),
    IfZ(Box<Term>, Box<Term>, Box<Term>),
    Fix(Binder, Box<Term>),
}

impl Term {
    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn pred(t: Term) -> Term {
        Term::Pred(Box::new(t))
    }

    pub fn lam(b: Binder, body: Term) -> Term {
        Term::Lam(b, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn ifz(scrut: Term, zero: Term, succ: Term) -> Term {
        Term::IfZ(Box::new(scrut), Box::new(zero), Box::new(succ))
    }

    pub fn fix(b: Binder, body: Term) -> Term {
        Term::Fix(b, Box::new(body))
    }

    /// `t n̲`.
    pub fn apply_nat(self, n: u64) -> Term {
        Term::app(self, Term::Const(n))
    }

    pub fn size(&self) -> u64 {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::Succ(t) | Term::Pred(t) => t.size() + 2,
            Term::Lam(_, t) | Term::Fix(_, t) => t.size() + 1,
            Term::App(t, u) => t.size() + u.size() + 1,
            Term::IfZ(t, u, v) => t.size() + u.size() + v.size() + 1,
        }
    }

    /// One more than the largest free index, or 0 for closed terms.
    pub fn free_bound(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::Const(_) => 0,
            Term::Succ(t) | Term::Pred(t) => t.free_bound(),
            Term::Lam(_, t) | Term::Fix(_, t) => t.free_bound().saturating_sub(1),
            Term::App(t, u) => t.free_bound().max(u.free_bound()),
            Term::IfZ(t, u, v) => t.free_bound().max(u.free_bound()).max(v.free_bound()),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_bound() == 0
    }

    /// Immediate subterms, left to right.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Const(_) => vec![],
            Term::Succ(t) | Term::Pred(t) | Term::Lam(_, t) | Term::Fix(_, t) => vec![t],
            Term::App(t, u) => vec![t, u],
            Term::IfZ(t, u, v) => vec![t, u, v],
        }
    }

    /// Every subterm, including the term itself, breadth-first.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let kids = out[i].children();
            out.extend(kids);
            i += 1;
        }
        out
    }

    pub fn head(&self) -> &'static str {
        match self {
            Term::Var(_) => "var",
            Term::Const(_) => "num",
            Term::Succ(_) => "s",
            Term::Pred(_) => "p",
            Term::Lam(..) => "lam",
            Term::App(..) => "app",
            Term::IfZ(..) => "ifz",
            Term::Fix(..) => "fix",
        }
    }

    /// Adds `by` to every index `>= cutoff`.
    pub fn shift(&self, by: isize, cutoff: usize) -> Term {
        let go = |t: &Term, c| Box::new(t.shift(by, c));
        match self {
            Term::Var(i) if *i >= cutoff => Term::Var(i.checked_add_signed(by).expect("negative index")),
            Term::Var(i) => Term::Var(*i),
            Term::Const(n) => Term::Const(*n),
            Term::Succ(t) => Term::Succ(go(t, cutoff)),
            Term::Pred(t) => Term::Pred(go(t, cutoff)),
            Term::Lam(b, t) => Term::Lam(b.clone(), go(t, cutoff + 1)),
            Term::Fix(b, t) => Term::Fix(b.clone(), go(t, cutoff + 1)),
            Term::App(t, u) => Term::App(go(t, cutoff), go(u, cutoff)),
            Term::IfZ(t, u, v) => Term::IfZ(go(t, cutoff), go(u, cutoff), go(v, cutoff)),
        }
    }

    /// Replaces index `j` by `s`.
    pub fn subst(&self, j: usize, s: &Term) -> Term {
        match self {
            Term::Var(i) if *i == j => s.clone(),
            Term::Var(i) => Term::Var(*i),
            Term::Const(n) => Term::Const(*n),
            Term::Succ(t) => Term::succ(t.subst(j, s)),
            Term::Pred(t) => Term::pred(t.subst(j, s)),
            Term::Lam(b, t) => Term::lam(b.clone(), t.subst(j + 1, &s.shift(1, 0))),
            Term::Fix(b, t) => Term::fix(b.clone(), t.subst(j + 1, &s.shift(1, 0))),
            Term::App(t, u) => Term::app(t.subst(j, s), u.subst(j, s)),
            Term::IfZ(t, u, v) => Term::ifz(t.subst(j, s), u.subst(j, s), v.subst(j, s)),
        }
    }

    /// `body[0 := arg]` for the body of a binder.
    pub fn instantiate(&self, arg: &Term) -> Term {
        self.subst(0, &arg.shift(1, 0)).shift(-1, 0)
    }
}

fn fresh(hint: &str, names: &[String]) -> String {
    let mut name = hint.to_string();
    while names.contains(&name) {
        name.push('\'');
    }
    name
}

fn write_binder(
    f: &mut fmt::Formatter<'_>,
    kw: &str,
    b: &Binder,
    body: &Term,
    names: &mut Vec<String>,
) -> fmt::Result {
    let name = fresh(&b.name, names);
    match &b.ty {
        Some(ty) => write!(f, "{kw}{name}:{ty}. ")?,
        None => write!(f, "{kw}{name}. ")?,
    }
    names.push(name);
    let r = write_term(f, body, names, Prec::Open);
    names.pop();
    r
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Open,
    App,
    Atom,
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term, names: &mut Vec<String>, prec: Prec) -> fmt::Result {
    let needs = |p: Prec| prec > p;
    match t {
        Term::Var(i) => match names.len().checked_sub(i + 1) {
            Some(k) => f.write_str(&names[k]),
            None => write!(f, "#{i}"),
        },
        Term::Const(n) => write!(f, "{n}"),
        Term::Succ(u) | Term::Pred(u) => {
            f.write_str(if matches!(t, Term::Succ(_)) { "s(" } else { "p(" })?;
            write_term(f, u, names, Prec::Open)?;
            f.write_str(")")
        }
        Term::App(g, a) => {
            if needs(Prec::App) {
                f.write_str("(")?;
            }
            write_term(f, g, names, Prec::App)?;
            f.write_str(" ")?;
            write_term(f, a, names, Prec::Atom)?;
            if needs(Prec::App) {
                f.write_str(")")?;
            }
            Ok(())
        }
        Term::Lam(..) | Term::Fix(..) | Term::IfZ(..) => {
            if needs(Prec::Open) {
                f.write_str("(")?;
            }
            match t {
                Term::Lam(b, body) => write_binder(f, "\\", b, body, names)?,
                Term::Fix(b, body) => write_binder(f, "fix ", b, body, names)?,
                Term::IfZ(s, z, n) => {
                    f.write_str("ifz ")?;
                    write_term(f, s, names, Prec::Open)?;
                    f.write_str(" then ")?;
                    write_term(f, z, names, Prec::Open)?;
                    f.write_str(" else ")?;
                    write_term(f, n, names, Prec::Open)?;
                }
                _ => unreachable!(),
            }
            if needs(Prec::Open) {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, &mut Vec::new(), Prec::Open)
    }
}
